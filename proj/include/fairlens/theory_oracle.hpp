// Copyright 2026 The FairLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Randomized falsification checks for the similarity-gap bounds and the
// cross-group accuracy bound.
//
// Each verifier runs `trials` independent trials. Trial k of verifier s draws
// from Rng(DeriveSeed(seed, s, k)), so results are bit-reproducible for a
// given config and do not depend on how trials are scheduled across workers.
// Verifiers never stop early; every violation is recorded with the inputs
// needed to replay it.
//
// Roughly a quarter of the vector trials use the extremal geometry for the
// bound under test (text perturbation tangent to the sphere, image vector
// along the difference of the unit text directions), where the exact bounds
// are attained with equality.

#ifndef FAIRLENS_THEORY_ORACLE_HPP_
#define FAIRLENS_THEORY_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairlens/errors.hpp"
#include "fairlens/group_fairness.hpp"
#include "fairlens/individual_fairness.hpp"
#include "fairlens/parallel.hpp"
#include "fairlens/random.hpp"
#include "fairlens/vector.hpp"

namespace fairlens {

struct OracleConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100000;
  std::size_t dim_min = 2;
  std::size_t dim_max = 512;
  // Ball radius as a fraction of the text norm, drawn from [lo, hi).
  double rho_fraction_lo = 0.001;
  double rho_fraction_hi = 0.99;
  double tolerance = kBoundTolerance;
};

inline void ValidateOracleConfig(const OracleConfig& config) {
  if (config.trials == 0) throw DomainError("trials must be at least 1");
  if (config.dim_min == 0 || config.dim_min > config.dim_max) {
    throw DomainError("dimension range must satisfy 1 <= min <= max");
  }
  if (!(config.rho_fraction_lo >= 0.0 &&
        config.rho_fraction_lo < config.rho_fraction_hi &&
        config.rho_fraction_hi < 1.0)) {
    throw DomainError("rho fraction range must satisfy 0 <= lo < hi < 1");
  }
  if (!(config.tolerance > 0.0)) throw DomainError("tolerance must be positive");
}

struct Violation {
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::map<std::string, std::vector<double>> inputs;
};

struct InequalityResult {
  std::string id;
  // Exact inequalities must never be violated; approximate ones are checked
  // under their qualifying hypothesis only.
  bool exact = true;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;
  // Largest rhs - lhs seen.
  double max_slack = 0.0;
  // Smallest rhs - lhs seen (negative only when violated).
  double min_slack = 0.0;
  // Largest lhs / rhs over trials with rhs > 0.
  double max_tightness = 0.0;
  // Linear bound only: largest gap * |t| / distance.
  std::optional<double> max_linear_ratio;
};

struct OracleResult {
  OracleConfig config;
  std::vector<InequalityResult> results;

  bool ExactInequalitiesHold() const {
    return std::all_of(results.begin(), results.end(),
                       [](const InequalityResult& r) {
                         return !r.exact || r.violation_count == 0;
                       });
  }
  bool AllHold() const {
    return std::all_of(
        results.begin(), results.end(),
        [](const InequalityResult& r) { return r.violation_count == 0; });
  }
};

inline constexpr const char* kBallBoundId = "ball_bound";
inline constexpr const char* kAngleBoundId = "angle_bound";
inline constexpr const char* kLinearBoundId = "linear_bound";
inline constexpr const char* kCrossGroupBoundId = "cross_group_bound";

namespace oracle_internal {

enum Stream : std::uint64_t {
  kBallStream = 1,
  kAngleStream = 2,
  kLinearStream = 3,
  kCrossGroupStream = 4,
};

struct TrialOutcome {
  bool checked = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> linear_ratio;
  std::map<std::string, std::vector<double>> inputs;
};

inline bool Violated(const TrialOutcome& o, const OracleConfig& config) {
  return o.lhs > o.rhs + config.tolerance;
}

inline std::vector<double> Gaussian(Rng& rng, std::size_t dim, double scale) {
  std::vector<double> out(dim);
  for (double& x : out) x = scale * rng.Normal();
  return out;
}

inline Vector RandomVector(Rng& rng, std::size_t dim) {
  // Log-uniform norm scale over ~6 orders of magnitude.
  const double scale = std::exp(rng.Uniform(-7.0, 7.0));
  while (true) {
    std::vector<double> values = Gaussian(rng, dim, scale);
    try {
      return Vector(std::move(values));
    } catch (const InvalidVectorError&) {
      // All-zero draw; astronomically rare, redraw.
    }
  }
}

inline std::vector<double> ToStd(const Vector& v) {
  return {v.values().begin(), v.values().end()};
}

// Unit vector orthogonal to `t` (dim >= 2).
inline std::vector<double> TangentDirection(Rng& rng, const Vector& t) {
  while (true) {
    std::vector<double> u = Gaussian(rng, t.dim(), 1.0);
    double along = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) along += u[i] * t[i];
    along /= t.norm() * t.norm();
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] -= along * t[i];
      norm_sq += u[i] * u[i];
    }
    if (norm_sq > 1e-24) {
      const double norm = std::sqrt(norm_sq);
      for (double& x : u) x /= norm;
      return u;
    }
  }
}

inline std::vector<double> UnitDirection(Rng& rng, std::size_t dim) {
  while (true) {
    std::vector<double> u = Gaussian(rng, dim, 1.0);
    double norm_sq = 0.0;
    for (double x : u) norm_sq += x * x;
    if (norm_sq > 1e-24) {
      const double norm = std::sqrt(norm_sq);
      for (double& x : u) x /= norm;
      return u;
    }
  }
}

// t + radius * direction.
inline Vector Offset(const Vector& t, const std::vector<double>& direction,
                     double radius) {
  std::vector<double> out(t.values().begin(), t.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += radius * direction[i];
  return Vector(std::move(out));
}

// Image vector maximising |cos(v, a) - cos(v, b)|: along a/|a| - b/|b|.
// Falls back to `fallback` when a and b are parallel.
inline Vector WorstCaseImage(const Vector& a, const Vector& b,
                             const Vector& fallback) {
  std::vector<double> out(a.dim());
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] / a.norm() - b[i] / b.norm();
    norm_sq += out[i] * out[i];
  }
  if (norm_sq == 0.0) return fallback;
  return Vector(std::move(out));
}

inline double SimilarityGap(const Vector& v, const Vector& a, const Vector& b) {
  return std::abs(CosineSimilarity(v, a) - CosineSimilarity(v, b));
}

// Draws t' in the closed ball of radius rho around t: uniform in volume, or on
// the tangent point of the sphere when `extremal`.
inline Vector DrawInBall(Rng& rng, const Vector& t, double rho, bool extremal) {
  if (extremal) {
    // Tangent point: |t' - t| = rho and t' - t orthogonal to t' gives the
    // largest angle, sin(theta) = rho / |t|. Move along the tangent by
    // rho * sqrt(1 - r^2) and back toward the origin by rho * r.
    const double r = rho / t.norm();
    const std::vector<double> u = TangentDirection(rng, t);
    std::vector<double> out(t.values().begin(), t.values().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += rho * std::sqrt(1.0 - r * r) * u[i] - rho * r * t[i] / t.norm();
    }
    return Vector(std::move(out));
  }
  const std::vector<double> u = UnitDirection(rng, t.dim());
  const double radius =
      rho * std::pow(rng.Uniform01(), 1.0 / static_cast<double>(t.dim()));
  return Offset(t, u, radius);
}

inline std::size_t DrawDim(Rng& rng, const OracleConfig& config) {
  return static_cast<std::size_t>(
      rng.UniformInt(static_cast<std::int64_t>(config.dim_min),
                     static_cast<std::int64_t>(config.dim_max)));
}

inline TrialOutcome BallTrial(Rng& rng, const OracleConfig& config) {
  const std::size_t dim = std::max<std::size_t>(DrawDim(rng, config), 2);
  const Vector t = RandomVector(rng, dim);
  const double fraction =
      rng.Uniform(config.rho_fraction_lo, config.rho_fraction_hi);
  const double rho = fraction * t.norm();
  const bool extremal = rng.UniformIndex(4) == 0;
  const Vector t_prime = DrawInBall(rng, t, rho, extremal);
  const Vector random_image = RandomVector(rng, dim);
  const Vector v =
      extremal ? WorstCaseImage(t, t_prime, random_image) : random_image;

  TrialOutcome out;
  out.checked = true;
  out.lhs = SimilarityGap(v, t_prime, t);
  out.rhs = BallGapBound(rho, t.norm());
  if (Violated(out, config)) out.inputs = {{"v", ToStd(v)},
                {"t", ToStd(t)},
                {"t_prime", ToStd(t_prime)},
                {"rho", {rho}}};
  return out;
}

inline TrialOutcome AngleTrial(Rng& rng, const OracleConfig& config) {
  const std::size_t dim = DrawDim(rng, config);
  const Vector t_a = RandomVector(rng, dim);
  // Half the trials use a nearby second text vector, where the bound is small.
  const bool nearby = dim >= 2 && rng.Bernoulli(0.5);
  const Vector t_b =
      nearby ? DrawInBall(rng, t_a,
                          rng.Uniform(config.rho_fraction_lo,
                                      config.rho_fraction_hi) *
                              t_a.norm(),
                          false)
             : RandomVector(rng, dim);
  const Vector random_image = RandomVector(rng, dim);
  const Vector v = rng.UniformIndex(4) == 0
                       ? WorstCaseImage(t_a, t_b, random_image)
                       : random_image;

  TrialOutcome out;
  out.checked = true;
  out.lhs = SimilarityGap(v, t_a, t_b);
  out.rhs = ExactAngleGapBound(t_a, t_b);
  if (Violated(out, config)) out.inputs = {{"v", ToStd(v)}, {"t_a", ToStd(t_a)}, {"t_b", ToStd(t_b)}};
  return out;
}

inline TrialOutcome LinearTrial(Rng& rng, const OracleConfig& config) {
  const std::size_t dim = std::max<std::size_t>(DrawDim(rng, config), 2);
  const Vector t = RandomVector(rng, dim);
  const double fraction = rng.Uniform(0.0, kLinearBoundCutoff);
  const bool extremal = rng.UniformIndex(4) == 0;
  const Vector t_prime = DrawInBall(rng, t, fraction * t.norm(), extremal);
  const Vector random_image = RandomVector(rng, dim);
  const Vector v =
      extremal ? WorstCaseImage(t, t_prime, random_image) : random_image;

  TrialOutcome out;
  const double distance = EuclideanDistance(t_prime, t);
  const double relative = LinearGapBound(distance, t.norm());
  // Rounding can push the extremal draw a hair past the cutoff.
  if (relative > kLinearBoundCutoff) return out;
  out.checked = true;
  out.lhs = SimilarityGap(v, t_prime, t);
  out.rhs = kLinearBoundSlack * relative;
  if (distance > 0.0) out.linear_ratio = out.lhs / relative;
  if (Violated(out, config)) out.inputs = {{"v", ToStd(v)}, {"t", ToStd(t)}, {"t_prime", ToStd(t_prime)}};
  return out;
}

inline TrialOutcome CrossGroupTrial(Rng& rng, const OracleConfig& config) {
  const GroupLabel a{"group", "a"};
  const GroupLabel b{"group", "b"};
  const auto n_a = static_cast<std::size_t>(rng.UniformInt(2, 200));
  const auto n_b = static_cast<std::size_t>(rng.UniformInt(2, 200));
  const char* languages[] = {"l0", "l1"};

  OutcomeSet outcomes(Taxonomy{{"group", {"a", "b"}}});
  outcomes.Reserve(2 * (n_a + n_b));
  const std::set<GroupLabel> in_group_a{a};
  const std::set<GroupLabel> in_group_b{b};
  std::vector<double> rates;
  for (const char* lang : languages) {
    const double rate_a = rng.Uniform01();
    const double rate_b = rng.Uniform01();
    rates.push_back(rate_a);
    rates.push_back(rate_b);
    for (std::size_t i = 0; i < n_a + n_b; ++i) {
      const bool in_a = i < n_a;
      outcomes.Add({std::to_string(i), lang, in_a ? in_group_a : in_group_b,
                    rng.Bernoulli(in_a ? rate_a : rate_b)});
    }
  }
  const bool swap_roles = rng.Bernoulli(0.5);
  const CrossGroupCheck check =
      swap_roles ? CheckCrossGroupBound(outcomes, "l1", "l0", b, a)
                 : CheckCrossGroupBound(outcomes, "l0", "l1", a, b);

  TrialOutcome out;
  out.checked = true;
  out.lhs = check.lhs;
  out.rhs = check.rhs;
  if (Violated(out, config)) out.inputs = {{"cohort_sizes",
                 {static_cast<double>(n_a), static_cast<double>(n_b)}},
                {"sampling_rates", rates},
                {"swap_roles", {swap_roles ? 1.0 : 0.0}}};
  return out;
}

template <typename TrialFn>
InequalityResult RunTrials(const OracleConfig& config, std::string id,
                           bool exact, Stream stream, TrialFn trial_fn) {
  ValidateOracleConfig(config);
  std::vector<TrialOutcome> outcomes(config.trials);
  std::vector<std::uint64_t> seeds(config.trials);
  ParallelFor(config.trials, [&](std::size_t k) {
    seeds[k] = DeriveSeed(config.seed, stream, k);
    Rng rng(seeds[k]);
    outcomes[k] = trial_fn(rng, config);
  });

  InequalityResult result;
  result.id = std::move(id);
  result.exact = exact;
  result.min_slack = std::numeric_limits<double>::infinity();
  result.max_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    TrialOutcome& o = outcomes[k];
    if (!o.checked) continue;
    ++result.checked;
    const double slack = o.rhs - o.lhs;
    result.max_slack = std::max(result.max_slack, slack);
    result.min_slack = std::min(result.min_slack, slack);
    if (o.rhs > 0.0) {
      result.max_tightness = std::max(result.max_tightness, o.lhs / o.rhs);
    }
    if (o.linear_ratio) {
      result.max_linear_ratio =
          std::max(result.max_linear_ratio.value_or(0.0), *o.linear_ratio);
    }
    if (Violated(o, config)) {
      ++result.violation_count;
      result.violations.push_back(
          {k, seeds[k], o.lhs, o.rhs, std::move(o.inputs)});
    }
  }
  if (result.checked == 0) {
    result.min_slack = 0.0;
    result.max_slack = 0.0;
  }
  return result;
}

}  // namespace oracle_internal

// |cos(v, t') - cos(v, t)| <= BallGapBound(rho, |t|) for t' in the ball.
inline InequalityResult VerifyBallBound(const OracleConfig& config) {
  return oracle_internal::RunTrials(config, kBallBoundId, true,
                                    oracle_internal::kBallStream,
                                    oracle_internal::BallTrial);
}

// |cos(v, t_a) - cos(v, t_b)| <= sqrt(2 (1 - cos(t_a, t_b))).
inline InequalityResult VerifyExactAngleBound(const OracleConfig& config) {
  return oracle_internal::RunTrials(config, kAngleBoundId, true,
                                    oracle_internal::kAngleStream,
                                    oracle_internal::AngleTrial);
}

// gap <= 1.01 * |t' - t| / |t| whenever |t' - t| / |t| <= 0.1.
inline InequalityResult VerifyLinearBound(const OracleConfig& config) {
  return oracle_internal::RunTrials(config, kLinearBoundId, false,
                                    oracle_internal::kLinearStream,
                                    oracle_internal::LinearTrial);
}

// Cross-group bound on random two-language binary-partition outcome sets.
inline InequalityResult VerifyCrossGroupBound(const OracleConfig& config) {
  return oracle_internal::RunTrials(config, kCrossGroupBoundId, true,
                                    oracle_internal::kCrossGroupStream,
                                    oracle_internal::CrossGroupTrial);
}

inline OracleResult VerifyTheory(const OracleConfig& config) {
  ValidateOracleConfig(config);
  OracleResult result;
  result.config = config;
  result.results.push_back(VerifyBallBound(config));
  result.results.push_back(VerifyExactAngleBound(config));
  result.results.push_back(VerifyLinearBound(config));
  result.results.push_back(VerifyCrossGroupBound(config));
  return result;
}

}  // namespace fairlens

#endif  // FAIRLENS_THEORY_ORACLE_HPP_
