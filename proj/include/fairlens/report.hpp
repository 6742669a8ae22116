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

// Report serialization.
//
// JSON documents have sorted keys and shortest round-trip doubles, so the same
// report always produces the same bytes. Undefined quantities are written as
// {"value": null, "reason": "..."}. CSV tables are plot/table ready; numbers
// use std::to_chars and never depend on the locale. Percentages are rendered
// with one decimal, rounding half away from zero.

#ifndef FAIRLENS_REPORT_HPP_
#define FAIRLENS_REPORT_HPP_

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fairlens/errors.hpp"
#include "fairlens/group_fairness.hpp"
#include "fairlens/individual_fairness.hpp"
#include "fairlens/ingest.hpp"
#include "fairlens/theory_oracle.hpp"

namespace fairlens {

inline constexpr const char* kToolVersion = "fairlens 1.0.0";

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Digests.

inline std::string Sha256Hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length,
                 EVP_sha256(), nullptr) != 1) {
    throw Error("DigestError", "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

inline std::string FileDigest(const std::string& path) {
  return "sha256:" + Sha256Hex(internal::ReadFile(path));
}

// ---------------------------------------------------------------------------
// Number formatting.

// Shortest decimal that parses back to `x`.
inline std::string FormatDouble(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw Error("FormatError", "cannot format double");
  return std::string(buf.data(), end);
}

// Fraction in [0, 1] as a percentage with one decimal, half away from zero.
// The value is first snapped to 1e-6 percentage points so binary noise such
// as 7.4499999999 (from 0.0745) rounds as the decimal it stands for.
inline std::string FormatPercent(double fraction) {
  const double pct = fraction * 100.0;
  const double snapped = std::round(pct * 1e6) / 1e6;
  double tenths = std::round(snapped * 10.0);
  if (tenths == 0.0) tenths = 0.0;  // no "-0.0"
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                 tenths / 10.0, std::chars_format::fixed, 1);
  if (ec != std::errc()) throw Error("FormatError", "cannot format percent");
  return std::string(buf.data(), end);
}

inline std::string FormatPercent(const std::optional<double>& fraction) {
  return fraction ? FormatPercent(*fraction) : "NA";
}

// ---------------------------------------------------------------------------
// JSON conversion.

inline Json Undefined(const std::string& reason) {
  return Json{{"value", nullptr}, {"reason", reason}};
}

inline Json OptionalNumber(const std::optional<double>& x,
                           const std::string& reason) {
  return x ? Json(*x) : Undefined(reason);
}

inline Json ToJson(const PairAudit& a) {
  Json j;
  j["image_id"] = a.image_id;
  j["lang_a"] = a.lang_a;
  j["lang_b"] = a.lang_b;
  j["sim_gap"] = a.sim_gap;
  j["text_distance"] = a.text_distance;
  j["ratio"] = a.ratio ? Json(*a.ratio) : Json("SKIPPED");
  j["exact_bound"] = a.exact_bound;
  j["approx_bound"] = a.approx_bound;
  j["reference_norm"] = a.reference_norm;
  return j;
}

inline Json ToJson(const IndividualFairnessReport& r) {
  Json j;
  j["lang_a"] = r.lang_a;
  j["lang_b"] = r.lang_b;
  j["portion_tags"] = r.portion_tags;
  j["audits"] = Json::array();
  for (const PairAudit& a : r.audits) j["audits"].push_back(ToJson(a));
  const std::string all_skipped = "every pair was skipped (text distance < " +
                                  FormatDouble(kSkipDistance) + ")";
  j["alpha_empirical"] = OptionalNumber(r.alpha_empirical, all_skipped);
  j["alpha_p95"] = OptionalNumber(r.alpha_p95, all_skipped);
  j["alpha_p99"] = OptionalNumber(r.alpha_p99, all_skipped);
  j["mean_text_distance"] = r.mean_text_distance;
  j["mean_sim_gap"] = r.mean_sim_gap;
  j["skipped_count"] = r.skipped_count;
  j["exact_bound_violations"] = r.exact_bound_violations;
  j["linear_bound_qualified"] = r.linear_bound_qualified;
  j["linear_bound_violations"] = r.linear_bound_violations;
  j["shuffled"] = r.shuffled;
  j["shuffle_seed"] = r.shuffle_seed ? Json(*r.shuffle_seed) : Json(nullptr);
  j["permutation"] = r.permutation;
  j["metadata"] = {
      {"alpha_definition", "maximum ratio over non-skipped pairs"},
      {"quantile_method", "nearest-rank"},
      {"skip_distance", kSkipDistance},
      {"bound_tolerance", kBoundTolerance},
      {"linear_bound_cutoff", kLinearBoundCutoff},
      {"linear_bound_slack", kLinearBoundSlack},
      {"reference_language", r.lang_a},
      {"shuffle_algorithm",
       "mt19937_64 seeded with shuffle_seed, Fisher-Yates from the last index"},
  };
  return j;
}

namespace internal {

inline std::optional<double> ReadOptional(const Json& j) {
  if (j.is_number()) return j.get<double>();
  return std::nullopt;
}

}  // namespace internal

// Inverse of ToJson(IndividualFairnessReport).
inline IndividualFairnessReport IndividualReportFromJson(const Json& j) {
  IndividualFairnessReport r;
  try {
    r.lang_a = j.at("lang_a").get<std::string>();
    r.lang_b = j.at("lang_b").get<std::string>();
    r.portion_tags = j.at("portion_tags").get<std::vector<std::string>>();
    for (const Json& a : j.at("audits")) {
      PairAudit audit;
      audit.image_id = a.at("image_id").get<std::string>();
      audit.lang_a = a.at("lang_a").get<std::string>();
      audit.lang_b = a.at("lang_b").get<std::string>();
      audit.sim_gap = a.at("sim_gap").get<double>();
      audit.text_distance = a.at("text_distance").get<double>();
      audit.ratio = internal::ReadOptional(a.at("ratio"));
      audit.exact_bound = a.at("exact_bound").get<double>();
      audit.approx_bound = a.at("approx_bound").get<double>();
      audit.reference_norm = a.at("reference_norm").get<double>();
      r.audits.push_back(std::move(audit));
    }
    r.alpha_empirical = internal::ReadOptional(j.at("alpha_empirical"));
    r.alpha_p95 = internal::ReadOptional(j.at("alpha_p95"));
    r.alpha_p99 = internal::ReadOptional(j.at("alpha_p99"));
    r.mean_text_distance = j.at("mean_text_distance").get<double>();
    r.mean_sim_gap = j.at("mean_sim_gap").get<double>();
    r.skipped_count = j.at("skipped_count").get<std::size_t>();
    r.exact_bound_violations = j.at("exact_bound_violations").get<std::size_t>();
    r.linear_bound_qualified = j.at("linear_bound_qualified").get<std::size_t>();
    r.linear_bound_violations =
        j.at("linear_bound_violations").get<std::size_t>();
    r.shuffled = j.at("shuffled").get<bool>();
    if (!j.at("shuffle_seed").is_null()) {
      r.shuffle_seed = j.at("shuffle_seed").get<std::uint64_t>();
    }
    r.permutation = j.at("permutation").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("individual report: ") + e.what());
  }
  return r;
}

inline Json ToJson(const GroupLabel& g) {
  return Json{{"dimension", g.dimension}, {"value", g.value}};
}

inline Json ToJson(const CrossGroupCheck& c) {
  return Json{{"lang_l", c.lang_l},
              {"lang_other", c.lang_other},
              {"group_a", ToJson(c.a)},
              {"group_b", ToJson(c.b)},
              {"gap", c.gap},
              {"disp_l", c.disp_l},
              {"disp_other", c.disp_other},
              {"p_b_l", c.p_b_l},
              {"p_a_other", c.p_a_other},
              {"lhs", c.lhs},
              {"rhs", c.rhs},
              {"holds", c.holds}};
}

inline Json ToJson(const GroupFairnessReport& r) {
  Json j;
  j["languages"] = r.languages;
  j["group_dims"] = r.group_dims;
  j["taxonomy"] = r.taxonomy;
  Json acc = Json::object();
  for (const auto& [lang, value] : r.acc_by_lang) {
    acc[lang] = {{"accuracy", OptionalNumber(value, "no outcomes")},
                 {"count", r.count_by_lang.at(lang)}};
  }
  j["acc_by_lang"] = acc;
  Json gap = Json::object();
  for (const auto& [key, value] : r.gap_matrix) {
    gap[key.first][key.second] = OptionalNumber(value, "empty language cohort");
  }
  j["gap_matrix"] = gap;
  Json by_group = Json::array();
  for (const auto& [key, value] : r.acc_by_lang_group) {
    by_group.push_back({{"language", key.first},
                        {"group", ToJson(key.second)},
                        {"count", r.count_by_lang_group.at(key)},
                        {"accuracy", OptionalNumber(value, "empty cohort")}});
  }
  j["acc_by_lang_group"] = by_group;
  Json disp = Json::array();
  for (const DispEntry& d : r.disp) {
    disp.push_back({{"language", d.language},
                    {"group_a", ToJson(d.a)},
                    {"group_b", ToJson(d.b)},
                    {"disp", OptionalNumber(d.value, d.reason)}});
  }
  j["disp_by_lang"] = disp;
  Json proportions = Json::array();
  for (const auto& [label, p] : r.proportions) {
    proportions.push_back({{"group", ToJson(label)}, {"proportion", p}});
  }
  j["proportions"] = proportions;
  j["cross_group_checks"] = Json::array();
  for (const CrossGroupCheck& c : r.cross_group_checks) {
    j["cross_group_checks"].push_back(ToJson(c));
  }
  j["stratified"] = Json::array();
  for (const StratifiedDisparity& s : r.stratified) {
    Json rows = Json::array();
    for (const StratumRow& row : s.rows) {
      rows.push_back({{"language", row.language},
                      {"stratum", row.stratum},
                      {"acc_a", OptionalNumber(row.acc_a, "empty cohort")},
                      {"acc_b", OptionalNumber(row.acc_b, "empty cohort")},
                      {"disp", OptionalNumber(row.disp, "empty cohort")}});
    }
    j["stratified"].push_back({{"group_a", ToJson(s.a)},
                               {"group_b", ToJson(s.b)},
                               {"stratify_dim", s.stratify_dim},
                               {"strata", s.strata},
                               {"rows", rows}});
  }
  j["warnings"] = r.warnings;
  j["metadata"] = {
      {"accuracy_unit", "fraction"},
      {"average_stratum",
       "disp between group accuracies macro-averaged over strata"},
      {"partition_tolerance", kPartitionTolerance},
      {"bound_tolerance", kIdentityTolerance},
  };
  return j;
}

inline Json ToJson(const OracleConfig& c) {
  return Json{{"seed", c.seed},
              {"trials", c.trials},
              {"dim_min", c.dim_min},
              {"dim_max", c.dim_max},
              {"rho_fraction_lo", c.rho_fraction_lo},
              {"rho_fraction_hi", c.rho_fraction_hi},
              {"tolerance", c.tolerance}};
}

inline Json ToJson(const OracleResult& r) {
  Json j;
  j["config"] = ToJson(r.config);
  j["exact_inequalities_hold"] = r.ExactInequalitiesHold();
  j["all_hold"] = r.AllHold();
  Json results = Json::array();
  for (const InequalityResult& ir : r.results) {
    Json violations = Json::array();
    for (const Violation& v : ir.violations) {
      violations.push_back({{"trial", v.trial},
                            {"trial_seed", v.trial_seed},
                            {"lhs", v.lhs},
                            {"rhs", v.rhs},
                            {"inputs", v.inputs}});
    }
    Json entry{{"id", ir.id},
               {"exact", ir.exact},
               {"checked", ir.checked},
               {"violation_count", ir.violation_count},
               {"violations", violations},
               {"max_slack", ir.max_slack},
               {"min_slack", ir.min_slack},
               {"max_tightness", ir.max_tightness}};
    if (ir.max_linear_ratio) entry["max_linear_ratio"] = *ir.max_linear_ratio;
    results.push_back(std::move(entry));
  }
  j["results"] = results;
  return j;
}

// ---------------------------------------------------------------------------
// Envelope.

struct AuditReportEnvelope {
  std::string tool_version = kToolVersion;
  // Input path -> "sha256:<hex>".
  std::map<std::string, std::string> input_digests;
  Json config = Json::object();
  std::optional<std::string> timestamp;
  std::string payload_type;
  Json payload;
};

inline Json ToJson(const AuditReportEnvelope& e) {
  return Json{{"tool_version", e.tool_version},
              {"input_digests", e.input_digests},
              {"config", e.config},
              {"timestamp", e.timestamp ? Json(*e.timestamp) : Json(nullptr)},
              {"payload_type", e.payload_type},
              {"payload", e.payload}};
}

// Pretty-printed, sorted keys, trailing newline.
inline std::string EmitJson(const Json& doc) { return doc.dump(2) + "\n"; }

inline std::string EmitJson(const AuditReportEnvelope& envelope) {
  return EmitJson(ToJson(envelope));
}

// ---------------------------------------------------------------------------
// CSV tables.

namespace internal {

inline std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string CsvRow(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += CsvField(fields[i]);
  }
  return out + "\n";
}

}  // namespace internal

// Scatter data (x = text distance, y = similarity gap). The first line carries
// the empirical alpha, i.e. the slope of the envelope line.
inline std::string EmitScatterTable(const IndividualFairnessReport& r) {
  std::string out = "# alpha_empirical=" +
                    (r.alpha_empirical ? FormatDouble(*r.alpha_empirical)
                                       : std::string("NA")) +
                    "\n";
  out += internal::CsvRow({"image_id", "text_distance", "sim_gap", "exact_bound"});
  for (const PairAudit& a : r.audits) {
    out += internal::CsvRow({a.image_id, FormatDouble(a.text_distance),
                             FormatDouble(a.sim_gap),
                             FormatDouble(a.exact_bound)});
  }
  return out;
}

inline constexpr const char* kFlagPivot = "pivot";
inline constexpr const char* kFlagAmplified = "amplified";
inline constexpr const char* kFlagMitigated = "mitigated";
inline constexpr const char* kFlagEqual = "equal";
inline constexpr const char* kFlagUndefined = "undefined";

// Compares a disparity with the pivot language's value for the same cell.
inline std::string DisparityFlag(const std::string& language,
                                 const std::string& pivot,
                                 const std::optional<double>& value,
                                 const std::optional<double>& pivot_value) {
  if (language == pivot) return kFlagPivot;
  if (!value || !pivot_value) return kFlagUndefined;
  if (*value > *pivot_value) return kFlagAmplified;
  if (*value < *pivot_value) return kFlagMitigated;
  return kFlagEqual;
}

// Tables keyed by payload name ("accuracy", "gap", "disp", and one
// "stratified_<dim>_by_<dim>" per stratified breakdown).
inline std::map<std::string, std::string> EmitGroupTables(
    const GroupFairnessReport& r, const std::string& pivot) {
  if (std::find(r.languages.begin(), r.languages.end(), pivot) ==
      r.languages.end()) {
    throw PivotError("pivot language '" + pivot + "' is not in the report");
  }
  using internal::CsvRow;
  std::map<std::string, std::string> tables;

  std::string acc = CsvRow({"language", "dimension", "group", "count",
                            "accuracy_pct"});
  for (const std::string& lang : r.languages) {
    acc += CsvRow({lang, "all", "all", std::to_string(r.count_by_lang.at(lang)),
                   FormatPercent(r.acc_by_lang.at(lang))});
    for (const std::string& dim : r.group_dims) {
      for (const std::string& value : r.taxonomy.at(dim)) {
        const std::pair key{lang, GroupLabel{dim, value}};
        acc += CsvRow({lang, dim, value,
                       std::to_string(r.count_by_lang_group.at(key)),
                       FormatPercent(r.acc_by_lang_group.at(key))});
      }
    }
  }
  tables["accuracy"] = std::move(acc);

  std::vector<std::string> header = {"language"};
  header.insert(header.end(), r.languages.begin(), r.languages.end());
  std::string gap = CsvRow(header);
  for (const std::string& l : r.languages) {
    std::vector<std::string> row = {l};
    for (const std::string& m : r.languages) {
      row.push_back(FormatPercent(r.gap_matrix.at({l, m})));
    }
    gap += CsvRow(row);
  }
  tables["gap"] = std::move(gap);

  std::map<std::tuple<std::string, GroupLabel, GroupLabel>,
           std::optional<double>>
      pivot_disp;
  for (const DispEntry& d : r.disp) {
    if (d.language == pivot) pivot_disp[{d.language, d.a, d.b}] = d.value;
  }
  std::string disp = CsvRow({"language", "dimension", "group_a", "group_b",
                             "disp_pct", "flag"});
  for (const DispEntry& d : r.disp) {
    const auto& pv = pivot_disp.at({pivot, d.a, d.b});
    disp += CsvRow({d.language, d.a.dimension, d.a.value, d.b.value,
                    FormatPercent(d.value),
                    DisparityFlag(d.language, pivot, d.value, pv)});
  }
  tables["disp"] = std::move(disp);

  for (const StratifiedDisparity& s : r.stratified) {
    std::vector<std::string> columns = s.strata;
    columns.push_back(kAverageStratum);
    std::vector<std::string> head = {"language", "row"};
    head.insert(head.end(), columns.begin(), columns.end());
    std::string table = CsvRow(head);

    std::map<std::pair<std::string, std::string>, const StratumRow*> cells;
    for (const StratumRow& row : s.rows) cells[{row.language, row.stratum}] = &row;
    for (const std::string& lang : r.languages) {
      std::vector<std::string> acc_a = {lang, s.a.value};
      std::vector<std::string> acc_b = {lang, s.b.value};
      std::vector<std::string> disp_row = {lang, "disp"};
      std::vector<std::string> flag_row = {lang, "flag"};
      for (const std::string& col : columns) {
        const StratumRow& cell = *cells.at({lang, col});
        const StratumRow& pivot_cell = *cells.at({pivot, col});
        acc_a.push_back(FormatPercent(cell.acc_a));
        acc_b.push_back(FormatPercent(cell.acc_b));
        disp_row.push_back(FormatPercent(cell.disp));
        flag_row.push_back(
            DisparityFlag(lang, pivot, cell.disp, pivot_cell.disp));
      }
      table += CsvRow(acc_a) + CsvRow(acc_b) + CsvRow(disp_row) +
               CsvRow(flag_row);
    }
    tables["stratified_" + s.a.dimension + "_by_" + s.stratify_dim] =
        std::move(table);
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Output.

// Writes every file into a staging directory inside `out_dir`, then renames
// them into place. On failure nothing is left in `out_dir` beyond files that
// existed before.
inline void WriteFilesAtomically(
    const std::filesystem::path& out_dir,
    const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error("OutputError",
                "cannot create '" + out_dir.string() + "': " + ec.message());
  }
  const fs::path staging =
      out_dir / (".staging-" + Sha256Hex(out_dir.string()).substr(0, 12));
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (ec) {
    throw Error("OutputError", "cannot create staging directory: " + ec.message());
  }
  try {
    for (const auto& [name, content] : files) {
      std::ofstream out(staging / name, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw Error("OutputError", "cannot write '" + name + "'");
    }
    for (const auto& [name, unused] : files) {
      fs::rename(staging / name, out_dir / name);
    }
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(staging, ec);
}

}  // namespace fairlens

#endif  // FAIRLENS_REPORT_HPP_
