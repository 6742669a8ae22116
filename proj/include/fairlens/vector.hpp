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

// Deterministic vector arithmetic used by every audit: the embedding Vector
// type, cosine similarity, Euclidean distance and argmax matching.
//
// All accumulation is plain left-to-right double summation. For the
// dimensions seen in practice (<= 4096) the rounding error stays far below
// the 1e-9 tolerances used by the bound checks.

#ifndef FAIRLENS_VECTOR_HPP_
#define FAIRLENS_VECTOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairlens/errors.hpp"

namespace fairlens {

// A non-zero, finite embedding vector. Invalid vectors cannot be constructed,
// so every function below may assume dim >= 1, finite components and a
// strictly positive norm.
class Vector {
 public:
  explicit Vector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw InvalidVectorError("vector must have at least one component");
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw InvalidVectorError("component " + std::to_string(i) +
                                 " is not finite");
      }
      sum_sq += values_[i] * values_[i];
    }
    norm_ = std::sqrt(sum_sq);
    if (!(norm_ > 0.0) || !std::isfinite(norm_)) {
      throw InvalidVectorError("vector norm must be finite and non-zero");
    }
  }

  Vector(std::initializer_list<double> values)
      : Vector(std::vector<double>(values)) {}

  std::size_t dim() const noexcept { return values_.size(); }
  double norm() const noexcept { return norm_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
};

namespace internal {

inline void CheckSameDim(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()));
  }
}

}  // namespace internal

inline double Dot(const Vector& a, const Vector& b) {
  internal::CheckSameDim(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

// <v,t> / (|v| |t|), clamped to [-1, 1] to absorb rounding.
inline double CosineSimilarity(const Vector& v, const Vector& t) {
  const double cosine = Dot(v, t) / (v.norm() * t.norm());
  return std::clamp(cosine, -1.0, 1.0);
}

inline double EuclideanDistance(const Vector& a, const Vector& b) {
  internal::CheckSameDim(a, b);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq);
}

// Distance between the unit directions of `a` and `b`. Equals
// sqrt(2 (1 - cos(a, b))) but does not cancel catastrophically when the
// vectors are nearly parallel.
inline double UnitDirectionDistance(const Vector& a, const Vector& b) {
  internal::CheckSameDim(a, b);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] / a.norm() - b[i] / b.norm();
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq);
}

inline Vector Scaled(const Vector& v, double factor) {
  std::vector<double> out(v.values().begin(), v.values().end());
  for (double& x : out) x *= factor;
  return Vector(std::move(out));
}

// Index of the candidate with the highest cosine similarity to `query`.
// Ties resolve to the smallest index.
inline std::size_t ArgmaxSimilarity(const Vector& query,
                                    std::span<const Vector> candidates) {
  if (candidates.empty()) {
    throw EmptyCandidateError("argmax over an empty candidate list");
  }
  std::size_t best = 0;
  double best_score = CosineSimilarity(query, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double score = CosineSimilarity(query, candidates[i]);
    if (score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace fairlens

#endif  // FAIRLENS_VECTOR_HPP_
