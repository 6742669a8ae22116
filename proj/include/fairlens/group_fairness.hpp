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

// Multilingual group fairness over per-item classification outcomes.
//
//   acc(L)          fraction of correct outcomes in language L
//   acc_a(L)        same, restricted to items in protected group a
//   gap(L, L')      |acc(L) - acc(L')|            cross-lingual gap
//   disp(L; a, b)   |acc_a(L) - acc_b(L)|         group rate gap
//
// For a binary partition {a, b} with proportions p_a + p_b = 1,
// acc(L) = p_a acc_a(L) + p_b acc_b(L), which gives the cross-group bound
//
//   |acc_a(L) - acc_b(L')| <= gap(L, L') + p_b(L) disp(L; a, b)
//                                        + p_a(L') disp(L'; a, b).
//
// Accuracies are stored as fractions in [0, 1]. Percentages only appear when
// tables are rendered.

#ifndef FAIRLENS_GROUP_FAIRNESS_HPP_
#define FAIRLENS_GROUP_FAIRNESS_HPP_

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fairlens/errors.hpp"

namespace fairlens {

inline constexpr double kPartitionTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-9;

struct GroupLabel {
  std::string dimension;
  std::string value;

  auto operator<=>(const GroupLabel&) const = default;
  std::string ToString() const { return dimension + "=" + value; }
};

// Declared group values per dimension, in canonical (table column) order.
using Taxonomy = std::map<std::string, std::vector<std::string>>;

struct OutcomeRecord {
  std::string item_id;
  std::string language;
  std::set<GroupLabel> groups;
  bool correct = false;
};

// Outcomes validated against a taxonomy: (item_id, language) is unique and
// every group label is declared.
class OutcomeSet {
 public:
  OutcomeSet() = default;
  explicit OutcomeSet(Taxonomy taxonomy) : taxonomy_(std::move(taxonomy)) {}

  void Add(OutcomeRecord record) {
    for (const GroupLabel& label : record.groups) {
      if (!HasLabel(label)) {
        throw TaxonomyError("item '" + record.item_id +
                            "' has undeclared group " + label.ToString());
      }
    }
    if (!keys_.emplace(record.item_id, record.language).second) {
      throw DuplicateIdError("duplicate outcome for item '" + record.item_id +
                             "' in language '" + record.language + "'");
    }
    records_.push_back(std::move(record));
  }

  bool HasLabel(const GroupLabel& label) const {
    auto it = taxonomy_.find(label.dimension);
    if (it == taxonomy_.end()) return false;
    return std::find(it->second.begin(), it->second.end(), label.value) !=
           it->second.end();
  }

  void Reserve(std::size_t n) {
    records_.reserve(n);
    keys_.reserve(n);
  }

  const Taxonomy& taxonomy() const noexcept { return taxonomy_; }
  const std::vector<OutcomeRecord>& records() const noexcept {
    return records_;
  }

 private:
  Taxonomy taxonomy_;
  std::vector<OutcomeRecord> records_;
  struct KeyHash {
    std::size_t operator()(const std::pair<std::string, std::string>& k) const {
      const std::size_t h = std::hash<std::string>{}(k.first);
      return h ^ (std::hash<std::string>{}(k.second) + 0x9e3779b97f4a7c15ULL +
                  (h << 6) + (h >> 2));
    }
  };
  std::unordered_set<std::pair<std::string, std::string>, KeyHash> keys_;
};

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;

  std::optional<double> Rate() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

// Counts outcomes in `language`, optionally restricted to records carrying
// every label in `within`.
inline Tally CountOutcomes(const OutcomeSet& outcomes,
                           const std::string& language,
                           std::span<const GroupLabel> within = {}) {
  Tally tally;
  for (const OutcomeRecord& r : outcomes.records()) {
    if (r.language != language) continue;
    const bool member =
        std::all_of(within.begin(), within.end(),
                    [&](const GroupLabel& g) { return r.groups.contains(g); });
    if (!member) continue;
    ++tally.total;
    if (r.correct) ++tally.correct;
  }
  return tally;
}

inline double Accuracy(const OutcomeSet& outcomes, const std::string& language) {
  const Tally tally = CountOutcomes(outcomes, language);
  if (tally.total == 0) {
    throw EmptyCohortError("no outcomes in language '" + language + "'");
  }
  return *tally.Rate();
}

// Accuracy on group `label` in `language`; empty when the cohort is empty.
inline std::optional<double> GroupAccuracy(const OutcomeSet& outcomes,
                                           const std::string& language,
                                           const GroupLabel& label) {
  if (!outcomes.HasLabel(label)) {
    throw TaxonomyError("unknown group " + label.ToString());
  }
  return CountOutcomes(outcomes, language, std::span(&label, 1)).Rate();
}

inline double Gap(double acc_l, double acc_other) {
  return std::abs(acc_l - acc_other);
}

inline double Gap(const OutcomeSet& outcomes, const std::string& lang_a,
                  const std::string& lang_b) {
  return Gap(Accuracy(outcomes, lang_a), Accuracy(outcomes, lang_b));
}

inline double Disp(double acc_a, double acc_b) { return std::abs(acc_a - acc_b); }

// Empty when either group has no outcomes in `language`.
inline std::optional<double> Disp(const OutcomeSet& outcomes,
                                  const std::string& language,
                                  const GroupLabel& a, const GroupLabel& b) {
  if (CountOutcomes(outcomes, language).total == 0) {
    throw EmptyCohortError("no outcomes in language '" + language + "'");
  }
  const auto acc_a = GroupAccuracy(outcomes, language, a);
  const auto acc_b = GroupAccuracy(outcomes, language, b);
  if (!acc_a || !acc_b) return std::nullopt;
  return Disp(*acc_a, *acc_b);
}

// Per-language rates of a binary partition {a, b}.
struct PartitionRates {
  double acc_a = 0.0;
  double acc_b = 0.0;
  double p_a = 0.0;

  double p_b() const { return 1.0 - p_a; }
  // Mixture p_a acc_a + p_b acc_b, i.e. the overall accuracy.
  double Overall() const { return p_a * acc_a + p_b() * acc_b; }
};

struct CrossGroupCheck {
  std::string lang_l;
  std::string lang_other;
  GroupLabel a;
  GroupLabel b;
  double gap = 0.0;
  double disp_l = 0.0;
  double disp_other = 0.0;
  double p_b_l = 0.0;
  double p_a_other = 0.0;
  // |acc_a(L) - acc_b(L')| and gap + p_b(L) disp(L) + p_a(L') disp(L').
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Bound terms from rates alone. Overall accuracies are the mixtures of the
// group rates.
inline CrossGroupCheck CrossGroupBound(const PartitionRates& l,
                                       const PartitionRates& other) {
  CrossGroupCheck check;
  check.gap = Gap(l.Overall(), other.Overall());
  check.disp_l = Disp(l.acc_a, l.acc_b);
  check.disp_other = Disp(other.acc_a, other.acc_b);
  check.p_b_l = l.p_b();
  check.p_a_other = other.p_a;
  check.lhs = std::abs(l.acc_a - other.acc_b);
  check.rhs = check.gap + check.p_b_l * check.disp_l +
              check.p_a_other * check.disp_other;
  check.holds = check.lhs <= check.rhs + kIdentityTolerance;
  return check;
}

namespace internal {

// Counts a and b in `language` and checks they partition its records.
inline PartitionRates MeasurePartition(const OutcomeSet& outcomes,
                                       const std::string& language,
                                       const GroupLabel& a,
                                       const GroupLabel& b, Tally* overall) {
  Tally ta, tb, all;
  for (const OutcomeRecord& r : outcomes.records()) {
    if (r.language != language) continue;
    ++all.total;
    all.correct += r.correct ? 1 : 0;
    const bool in_a = r.groups.contains(a);
    const bool in_b = r.groups.contains(b);
    if (in_a == in_b) {
      throw PartitionError("item '" + r.item_id + "' in language '" +
                           language + "' is in " + (in_a ? "both" : "neither") +
                           " of " + a.ToString() + ", " + b.ToString());
    }
    Tally& t = in_a ? ta : tb;
    ++t.total;
    t.correct += r.correct ? 1 : 0;
  }
  if (all.total == 0) {
    throw EmptyCohortError("no outcomes in language '" + language + "'");
  }
  if (ta.total == 0 || tb.total == 0) {
    throw PartitionError("groups " + a.ToString() + " and " + b.ToString() +
                         " must both be non-empty in language '" + language +
                         "'");
  }
  PartitionRates rates;
  rates.acc_a = *ta.Rate();
  rates.acc_b = *tb.Rate();
  rates.p_a = static_cast<double>(ta.total) / static_cast<double>(all.total);
  const double p_b =
      static_cast<double>(tb.total) / static_cast<double>(all.total);
  if (std::abs(rates.p_a + p_b - 1.0) > kPartitionTolerance) {
    throw PartitionError("group proportions do not sum to one");
  }
  if (overall != nullptr) *overall = all;
  return rates;
}

}  // namespace internal

// Cross-group bound evaluated on counted outcomes. The gap term uses the
// counted overall accuracies; requires {a, b} to partition both languages.
inline CrossGroupCheck CheckCrossGroupBound(const OutcomeSet& outcomes,
                                            const std::string& lang_l,
                                            const std::string& lang_other,
                                            const GroupLabel& a,
                                            const GroupLabel& b) {
  if (!outcomes.HasLabel(a)) throw TaxonomyError("unknown group " + a.ToString());
  if (!outcomes.HasLabel(b)) throw TaxonomyError("unknown group " + b.ToString());
  Tally overall_l, overall_other;
  const PartitionRates l =
      internal::MeasurePartition(outcomes, lang_l, a, b, &overall_l);
  const PartitionRates other =
      internal::MeasurePartition(outcomes, lang_other, a, b, &overall_other);

  CrossGroupCheck check = CrossGroupBound(l, other);
  check.lang_l = lang_l;
  check.lang_other = lang_other;
  check.a = a;
  check.b = b;
  check.gap = Gap(*overall_l.Rate(), *overall_other.Rate());
  check.rhs = check.gap + check.p_b_l * check.disp_l +
              check.p_a_other * check.disp_other;
  check.holds = check.lhs <= check.rhs + kIdentityTolerance;
  return check;
}

// ---------------------------------------------------------------------------
// Full audit.

struct DispEntry {
  std::string language;
  GroupLabel a;
  GroupLabel b;
  std::optional<double> value;
  // Why `value` is empty.
  std::string reason;
};

// Disparity between the two values of a binary dimension, broken down by the
// values of a second (stratifying) dimension. The last stratum, "Average",
// compares the macro-averaged accuracies of a and b over all strata.
struct StratumRow {
  std::string language;
  std::string stratum;
  std::optional<double> acc_a;
  std::optional<double> acc_b;
  std::optional<double> disp;
};

struct StratifiedDisparity {
  GroupLabel a;
  GroupLabel b;
  std::string stratify_dim;
  std::vector<std::string> strata;
  std::vector<StratumRow> rows;  // language-major, strata order
};

inline constexpr const char* kAverageStratum = "Average";

struct GroupFairnessReport {
  std::vector<std::string> languages;
  std::vector<std::string> group_dims;
  Taxonomy taxonomy;
  std::map<std::string, std::optional<double>> acc_by_lang;
  std::map<std::string, std::size_t> count_by_lang;
  // Every ordered pair including the diagonal.
  std::map<std::pair<std::string, std::string>, std::optional<double>>
      gap_matrix;
  std::map<std::pair<std::string, GroupLabel>, std::optional<double>>
      acc_by_lang_group;
  std::map<std::pair<std::string, GroupLabel>, std::size_t>
      count_by_lang_group;
  std::vector<DispEntry> disp;
  // Pooled over the audited languages.
  std::map<GroupLabel, double> proportions;
  std::vector<CrossGroupCheck> cross_group_checks;
  std::vector<StratifiedDisparity> stratified;
  std::vector<std::string> warnings;
};

struct GroupAuditOptions {
  std::vector<std::string> languages;
  std::vector<std::string> group_dims;
  // When set, each binary dimension in group_dims is also broken down by this
  // dimension's values.
  std::optional<std::string> stratify_dim;
};

namespace internal {

inline const std::vector<std::string>& DimensionValues(
    const OutcomeSet& outcomes, const std::string& dim) {
  auto it = outcomes.taxonomy().find(dim);
  if (it == outcomes.taxonomy().end()) {
    throw TaxonomyError("unknown group dimension '" + dim + "'");
  }
  return it->second;
}

inline StratifiedDisparity Stratify(const OutcomeSet& outcomes,
                                    std::span<const std::string> languages,
                                    const GroupLabel& a, const GroupLabel& b,
                                    const std::string& stratify_dim) {
  StratifiedDisparity table;
  table.a = a;
  table.b = b;
  table.stratify_dim = stratify_dim;
  table.strata = DimensionValues(outcomes, stratify_dim);
  for (const std::string& lang : languages) {
    double sum_a = 0.0, sum_b = 0.0;
    bool complete = true;
    for (const std::string& value : table.strata) {
      const GroupLabel stratum{stratify_dim, value};
      const GroupLabel with_a[] = {a, stratum};
      const GroupLabel with_b[] = {b, stratum};
      StratumRow row;
      row.language = lang;
      row.stratum = value;
      row.acc_a = CountOutcomes(outcomes, lang, with_a).Rate();
      row.acc_b = CountOutcomes(outcomes, lang, with_b).Rate();
      if (row.acc_a && row.acc_b) {
        row.disp = Disp(*row.acc_a, *row.acc_b);
        sum_a += *row.acc_a;
        sum_b += *row.acc_b;
      } else {
        complete = false;
      }
      table.rows.push_back(std::move(row));
    }
    StratumRow average;
    average.language = lang;
    average.stratum = kAverageStratum;
    if (complete && !table.strata.empty()) {
      const auto n = static_cast<double>(table.strata.size());
      average.acc_a = sum_a / n;
      average.acc_b = sum_b / n;
      average.disp = Disp(*average.acc_a, *average.acc_b);
    }
    table.rows.push_back(std::move(average));
  }
  return table;
}

}  // namespace internal

// Never aborts on empty cohorts: undefined entries are left empty and noted in
// `warnings`. Unknown dimensions are a TaxonomyError.
inline GroupFairnessReport RunGroupAudit(const OutcomeSet& outcomes,
                                         const GroupAuditOptions& options) {
  if (options.languages.empty()) {
    throw EmptyCohortError("group audit needs at least one language");
  }
  GroupFairnessReport report;
  report.languages = options.languages;
  report.group_dims = options.group_dims;
  for (const std::string& dim : options.group_dims) {
    report.taxonomy[dim] = internal::DimensionValues(outcomes, dim);
  }
  if (options.stratify_dim) {
    report.taxonomy[*options.stratify_dim] =
        internal::DimensionValues(outcomes, *options.stratify_dim);
  }

  for (const std::string& lang : options.languages) {
    const Tally tally = CountOutcomes(outcomes, lang);
    report.count_by_lang[lang] = tally.total;
    report.acc_by_lang[lang] = tally.Rate();
    if (!tally.Rate()) {
      report.warnings.push_back("no outcomes in language '" + lang + "'");
    }
  }
  for (const std::string& l : options.languages) {
    for (const std::string& m : options.languages) {
      const auto& acc_l = report.acc_by_lang[l];
      const auto& acc_m = report.acc_by_lang[m];
      report.gap_matrix[{l, m}] =
          (acc_l && acc_m) ? std::optional(l == m ? 0.0 : Gap(*acc_l, *acc_m))
                           : std::nullopt;
    }
  }

  std::size_t pooled_total = 0;
  for (const std::string& lang : options.languages) {
    pooled_total += report.count_by_lang[lang];
  }
  for (const std::string& dim : options.group_dims) {
    const auto& values = report.taxonomy[dim];
    for (const std::string& value : values) {
      const GroupLabel label{dim, value};
      std::size_t pooled = 0;
      for (const std::string& lang : options.languages) {
        const Tally t = CountOutcomes(outcomes, lang, std::span(&label, 1));
        report.acc_by_lang_group[{lang, label}] = t.Rate();
        report.count_by_lang_group[{lang, label}] = t.total;
        pooled += t.total;
      }
      report.proportions[label] =
          pooled_total == 0 ? 0.0
                            : static_cast<double>(pooled) /
                                  static_cast<double>(pooled_total);
    }
    for (const std::string& lang : options.languages) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
          DispEntry entry{lang, {dim, values[i]}, {dim, values[j]}, {}, {}};
          const auto& acc_a = report.acc_by_lang_group[{lang, entry.a}];
          const auto& acc_b = report.acc_by_lang_group[{lang, entry.b}];
          if (acc_a && acc_b) {
            entry.value = Disp(*acc_a, *acc_b);
          } else {
            entry.reason = "empty cohort: " +
                           (acc_a ? entry.b : entry.a).ToString() +
                           " in language '" + lang + "'";
            report.warnings.push_back(entry.reason);
          }
          report.disp.push_back(std::move(entry));
        }
      }
    }
  }

  // Cross-group bound for every binary dimension and ordered language pair.
  for (const std::string& dim : options.group_dims) {
    const auto& values = report.taxonomy[dim];
    if (values.size() != 2) continue;
    const GroupLabel first{dim, values[0]};
    const GroupLabel second{dim, values[1]};
    for (const std::string& l : options.languages) {
      for (const std::string& m : options.languages) {
        if (l == m) continue;
        for (const auto& [a, b] : {std::pair(first, second),
                                   std::pair(second, first)}) {
          try {
            report.cross_group_checks.push_back(
                CheckCrossGroupBound(outcomes, l, m, a, b));
          } catch (const Error& e) {
            report.warnings.push_back("cross-group bound skipped for " + l +
                                      "/" + m + ": " + e.what());
          }
        }
      }
    }
    if (options.stratify_dim && *options.stratify_dim != dim) {
      report.stratified.push_back(internal::Stratify(
          outcomes, options.languages, first, second, *options.stratify_dim));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Age buckets used for age classification: 0-2, 3-19, 20-49, 50-69, 70+.
// Age 2 belongs to the infant bucket.

inline const std::vector<std::string>& AgeBuckets() {
  static const std::vector<std::string> kBuckets = {"0-2", "3-19", "20-49",
                                                    "50-69", "70+"};
  return kBuckets;
}

inline std::string AgeBucket(int age) {
  if (age < 0) throw DomainError("age must be non-negative");
  if (age <= 2) return "0-2";
  if (age <= 19) return "3-19";
  if (age <= 49) return "20-49";
  if (age <= 69) return "50-69";
  return "70+";
}

// Maps a ranged age label such as "10-19" or "more than 70" to its bucket by
// the range's lower bound.
inline std::string AgeBucketFromRange(const std::string& label) {
  std::size_t pos = label.find_first_of("0123456789");
  if (pos == std::string::npos) {
    throw TaxonomyError("age label without a number: '" + label + "'");
  }
  int lower = 0;
  while (pos < label.size() && label[pos] >= '0' && label[pos] <= '9') {
    lower = lower * 10 + (label[pos] - '0');
    ++pos;
  }
  return AgeBucket(lower);
}

}  // namespace fairlens

#endif  // FAIRLENS_GROUP_FAIRNESS_HPP_
