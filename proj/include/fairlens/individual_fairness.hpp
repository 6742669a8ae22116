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

// Multilingual individual fairness.
//
// A model is alpha-individually fair across languages L and L' when, for every
// image I with captions T(L) and T(L'),
//
//   |S(I, T(L)) - S(I, T(L'))| <= alpha * |t(L) - t(L')|
//
// where S is cosine similarity and t(.) are text embeddings. This header
// audits image/caption triples against that definition and evaluates three
// upper bounds on the similarity gap:
//
//   exact bound    sqrt(2 (1 - cos theta)), theta the angle between t(L) and
//                  t(L'); holds for every image vector.
//   ball bound     sqrt(2 (1 - sqrt(1 - (rho / |t|)^2))) when t(L') lies in
//                  the closed ball of radius rho < |t| around t = t(L).
//   linear bound   |t(L') - t(L)| / |t(L)|; a first-order approximation that
//                  is only checked when the relative distance is <= 0.1, with
//                  a 1.01 slack factor.

#ifndef FAIRLENS_INDIVIDUAL_FAIRNESS_HPP_
#define FAIRLENS_INDIVIDUAL_FAIRNESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairlens/errors.hpp"
#include "fairlens/parallel.hpp"
#include "fairlens/random.hpp"
#include "fairlens/vector.hpp"

namespace fairlens {

// Text distances below this are treated as coincident captions; their ratio is
// skipped instead of dividing by ~0.
inline constexpr double kSkipDistance = 1e-12;
// Absolute tolerance for float rounding in exact bound checks.
inline constexpr double kBoundTolerance = 1e-9;
// The linear bound is only asserted at relative distance <= this cutoff...
inline constexpr double kLinearBoundCutoff = 0.1;
// ...and with this multiplicative slack. At the cutoff the worst case is
// 1 / cos(theta / 2) ~= 1.00125.
inline constexpr double kLinearBoundSlack = 1.01;

// One image with captions in two or more languages.
struct GroundedTriple {
  std::string image_id;
  Vector image;
  std::map<std::string, Vector> text_by_lang;
  std::string portion_tag;
};

struct PairAudit {
  std::string image_id;
  std::string lang_a;
  std::string lang_b;
  double sim_gap = 0.0;
  double text_distance = 0.0;
  // sim_gap / text_distance; empty when the pair is skipped.
  std::optional<double> ratio;
  double exact_bound = 0.0;
  // Linear bound with lang_a's text norm as reference.
  double approx_bound = 0.0;
  double reference_norm = 0.0;

  friend bool operator==(const PairAudit&, const PairAudit&) = default;
};

struct IndividualFairnessReport {
  std::string lang_a;
  std::string lang_b;
  // Distinct portion tags in first-seen order.
  std::vector<std::string> portion_tags;
  std::vector<PairAudit> audits;
  // Maximum ratio over non-skipped pairs; empty when every pair is skipped.
  std::optional<double> alpha_empirical;
  // Nearest-rank quantiles of the non-skipped ratios.
  std::optional<double> alpha_p95;
  std::optional<double> alpha_p99;
  double mean_text_distance = 0.0;
  double mean_sim_gap = 0.0;
  std::size_t skipped_count = 0;
  std::size_t exact_bound_violations = 0;
  std::size_t linear_bound_qualified = 0;
  std::size_t linear_bound_violations = 0;

  bool shuffled = false;
  std::optional<std::uint64_t> shuffle_seed;
  // permutation[i] is the triple whose image was paired with triple i's
  // captions. Empty for unshuffled audits.
  std::vector<std::size_t> permutation;
};

// sqrt(2 (1 - cos theta)) for the angle theta between `a` and `b`.
inline double ExactAngleGapBound(const Vector& a, const Vector& b) {
  return UnitDirectionDistance(a, b);
}

// Closed-ball bound on the similarity gap. Requires 0 <= rho < t_norm.
inline double BallGapBound(double rho, double t_norm) {
  if (!(t_norm > 0.0)) throw DomainError("text norm must be positive");
  if (!(rho >= 0.0)) throw DomainError("ball radius must be non-negative");
  if (!(rho < t_norm)) {
    throw DomainError("ball radius must be smaller than the text norm");
  }
  const double r = rho / t_norm;
  // 1 - sqrt(1 - r^2) == r^2 / (1 + sqrt(1 - r^2)), without cancellation.
  return r * std::sqrt(2.0 / (1.0 + std::sqrt(1.0 - r * r)));
}

inline double LinearGapBound(double distance, double t_norm) {
  if (!(t_norm > 0.0)) throw DomainError("text norm must be positive");
  if (!(distance >= 0.0)) throw DomainError("distance must be non-negative");
  return distance / t_norm;
}

namespace internal {

inline const Vector& TextFor(const GroundedTriple& triple,
                             const std::string& lang) {
  auto it = triple.text_by_lang.find(lang);
  if (it == triple.text_by_lang.end()) {
    throw MissingLanguageError("image '" + triple.image_id +
                               "' has no caption in language '" + lang + "'");
  }
  return it->second;
}

// Nearest-rank quantile of a sorted, non-empty sample.
inline double NearestRank(std::span<const double> sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace internal

inline PairAudit AuditPair(const GroundedTriple& triple,
                           const std::string& lang_a,
                           const std::string& lang_b) {
  const Vector& text_a = internal::TextFor(triple, lang_a);
  const Vector& text_b = internal::TextFor(triple, lang_b);

  PairAudit audit;
  audit.image_id = triple.image_id;
  audit.lang_a = lang_a;
  audit.lang_b = lang_b;
  audit.sim_gap = std::abs(CosineSimilarity(triple.image, text_a) -
                           CosineSimilarity(triple.image, text_b));
  audit.text_distance = EuclideanDistance(text_a, text_b);
  if (audit.text_distance >= kSkipDistance) {
    audit.ratio = audit.sim_gap / audit.text_distance;
  }
  audit.exact_bound = ExactAngleGapBound(text_a, text_b);
  audit.reference_norm = text_a.norm();
  audit.approx_bound = LinearGapBound(audit.text_distance, text_a.norm());
  return audit;
}

inline IndividualFairnessReport RunIndividualAudit(
    std::span<const GroundedTriple> triples, const std::string& lang_a,
    const std::string& lang_b) {
  if (triples.empty()) {
    throw EmptyCohortError("individual audit needs at least one triple");
  }
  IndividualFairnessReport report;
  report.lang_a = lang_a;
  report.lang_b = lang_b;
  report.audits.resize(triples.size());
  ParallelFor(triples.size(), [&](std::size_t i) {
    try {
      report.audits[i] = AuditPair(triples[i], lang_a, lang_b);
    } catch (Error& e) {
      e.Prepend("triple " + std::to_string(i));
      throw;
    }
  });

  std::vector<double> ratios;
  double distance_sum = 0.0;
  double gap_sum = 0.0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const std::string& tag = triples[i].portion_tag;
    if (std::find(report.portion_tags.begin(), report.portion_tags.end(),
                  tag) == report.portion_tags.end()) {
      report.portion_tags.push_back(tag);
    }
    const PairAudit& audit = report.audits[i];
    distance_sum += audit.text_distance;
    gap_sum += audit.sim_gap;
    if (audit.ratio) {
      ratios.push_back(*audit.ratio);
    } else {
      ++report.skipped_count;
    }
    if (audit.sim_gap > audit.exact_bound + kBoundTolerance) {
      ++report.exact_bound_violations;
    }
    if (audit.approx_bound <= kLinearBoundCutoff) {
      ++report.linear_bound_qualified;
      if (audit.sim_gap > kLinearBoundSlack * audit.approx_bound) {
        ++report.linear_bound_violations;
      }
    }
  }
  const auto n = static_cast<double>(triples.size());
  report.mean_text_distance = distance_sum / n;
  report.mean_sim_gap = gap_sum / n;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    report.alpha_empirical = ratios.back();
    report.alpha_p95 = internal::NearestRank(ratios, 0.95);
    report.alpha_p99 = internal::NearestRank(ratios, 0.99);
  }
  return report;
}

// Pairs each triple's captions with another triple's image, chosen by a
// seeded Fisher-Yates permutation (see random.hpp), then audits the result.
// The permutation may contain fixed points.
inline IndividualFairnessReport ShuffledAudit(
    std::span<const GroundedTriple> triples, const std::string& lang_a,
    const std::string& lang_b, std::uint64_t seed) {
  if (triples.size() < 2) {
    throw DegenerateShuffleError("shuffling needs at least two triples, got " +
                                 std::to_string(triples.size()));
  }
  const std::vector<std::size_t> perm =
      SeededPermutation(triples.size(), seed);
  std::vector<GroundedTriple> shuffled(triples.begin(), triples.end());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    shuffled[i].image_id = triples[perm[i]].image_id;
    shuffled[i].image = triples[perm[i]].image;
  }
  IndividualFairnessReport report = RunIndividualAudit(shuffled, lang_a, lang_b);
  report.shuffled = true;
  report.shuffle_seed = seed;
  report.permutation = perm;
  return report;
}

}  // namespace fairlens

#endif  // FAIRLENS_INDIVIDUAL_FAIRNESS_HPP_
