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

#include "fairlens/theory_oracle.hpp"

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "fairlens/individual_fairness.hpp"

namespace fairlens {
namespace {

OracleConfig SmallConfig(std::uint64_t seed = 3) {
  OracleConfig c;
  c.seed = seed;
  c.trials = 3000;
  c.dim_min = 2;
  c.dim_max = 64;
  return c;
}

TEST(OracleConfigTest, Validation) {
  EXPECT_NO_THROW(ValidateOracleConfig(OracleConfig{}));
  OracleConfig c;
  c.trials = 0;
  EXPECT_THROW(ValidateOracleConfig(c), DomainError);
  c = OracleConfig{};
  c.dim_min = 10;
  c.dim_max = 5;
  EXPECT_THROW(ValidateOracleConfig(c), DomainError);
  c = OracleConfig{};
  c.rho_fraction_hi = 1.0;
  EXPECT_THROW(ValidateOracleConfig(c), DomainError);
  c = OracleConfig{};
  c.rho_fraction_lo = 0.5;
  c.rho_fraction_hi = 0.5;
  EXPECT_THROW(ValidateOracleConfig(c), DomainError);
  c = OracleConfig{};
  c.tolerance = 0.0;
  EXPECT_THROW(ValidateOracleConfig(c), DomainError);
}

TEST(TheoryOracleTest, ExactInequalitiesHold) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const OracleResult r = VerifyTheory(SmallConfig(seed));
    ASSERT_EQ(r.results.size(), 4u);
    EXPECT_TRUE(r.ExactInequalitiesHold());
    EXPECT_TRUE(r.AllHold());
    for (const InequalityResult& ir : r.results) {
      EXPECT_EQ(ir.violation_count, 0u) << ir.id;
      EXPECT_TRUE(ir.violations.empty()) << ir.id;
      EXPECT_EQ(ir.checked, 3000u) << ir.id;
      EXPECT_GE(ir.min_slack, -1e-9) << ir.id;
    }
  }
}

TEST(TheoryOracleTest, ExtremalGeometryMakesBoundsTight) {
  const OracleResult r = VerifyTheory(SmallConfig());
  for (const InequalityResult& ir : r.results) {
    if (ir.id == kBallBoundId || ir.id == kAngleBoundId) {
      EXPECT_GT(ir.max_tightness, 0.999) << ir.id;
    }
  }
}

TEST(TheoryOracleTest, LinearRatioStaysBelowHalfAngleBound) {
  const InequalityResult r = VerifyLinearBound(SmallConfig());
  EXPECT_FALSE(r.exact);
  ASSERT_TRUE(r.max_linear_ratio.has_value());
  // 1 / cos(theta / 2) at sin(theta) = 0.1.
  const double limit = 1.0 / std::cos(std::asin(0.1) / 2.0);
  EXPECT_NEAR(limit, 1.00125, 1e-5);
  EXPECT_LE(*r.max_linear_ratio, limit + 1e-9);
  EXPECT_GT(*r.max_linear_ratio, 0.99);
}

TEST(TheoryOracleTest, BitReproducibleAcrossRunsAndWorkerCounts) {
  const OracleConfig c = SmallConfig(7);
  const OracleResult a = VerifyTheory(c);
  setenv("FAIRLENS_THREADS", "1", 1);
  const OracleResult b = VerifyTheory(c);
  unsetenv("FAIRLENS_THREADS");
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].max_slack, b.results[i].max_slack);
    EXPECT_EQ(a.results[i].min_slack, b.results[i].min_slack);
    EXPECT_EQ(a.results[i].max_tightness, b.results[i].max_tightness);
    EXPECT_EQ(a.results[i].max_linear_ratio, b.results[i].max_linear_ratio);
  }
}

TEST(TheoryOracleTest, BallSlackShrinksWithRadius) {
  OracleConfig small = SmallConfig();
  small.rho_fraction_lo = 0.005;
  small.rho_fraction_hi = 0.01;
  OracleConfig large = SmallConfig();
  large.rho_fraction_lo = 0.85;
  large.rho_fraction_hi = 0.9;
  EXPECT_LT(VerifyBallBound(small).max_slack, VerifyBallBound(large).max_slack);
}

TEST(TheoryOracleTest, DegenerateInputsSatisfyBounds) {
  const Vector t({3.0, 4.0});
  const Vector v({1.0, -2.0});
  EXPECT_EQ(std::abs(CosineSimilarity(v, t) - CosineSimilarity(v, t)), 0.0);
  EXPECT_EQ(BallGapBound(0.0, t.norm()), 0.0);
  EXPECT_EQ(ExactAngleGapBound(t, t), 0.0);
  const Vector a({1.0, 0.0});
  const Vector b({0.0, 1.0});
  EXPECT_LE(std::abs(CosineSimilarity(a, a) - CosineSimilarity(a, b)),
            ExactAngleGapBound(a, b));
  EXPECT_DOUBLE_EQ(ExactAngleGapBound(a, b), std::sqrt(2.0));
}

}  // namespace
}  // namespace fairlens
