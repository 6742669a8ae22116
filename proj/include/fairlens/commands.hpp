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

// Subcommand bodies for the fairlens tool. Each takes fully parsed arguments,
// writes its outputs under `out`, reports diagnostics on `err` and returns the
// process exit code.

#ifndef FAIRLENS_COMMANDS_HPP_
#define FAIRLENS_COMMANDS_HPP_

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fairlens/errors.hpp"
#include "fairlens/group_fairness.hpp"
#include "fairlens/individual_fairness.hpp"
#include "fairlens/ingest.hpp"
#include "fairlens/report.hpp"
#include "fairlens/theory_oracle.hpp"
#include "fairlens/zeroshot.hpp"

namespace fairlens {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitUsage = 64;

struct IndividualAuditArgs {
  std::string embeddings;
  std::string manifest;
  std::string lang_a = "en";
  std::string lang_b;
  std::optional<std::uint64_t> shuffle_seed;
  std::string out;
  bool wall_clock = false;
};

struct GroupAuditArgs {
  std::string embeddings;
  std::string manifest;
  std::string prompts;
  // Defaults to `embeddings` when empty.
  std::string prompt_embeddings;
  // Defaults to every language of the prompt spec.
  std::vector<std::string> languages;
  std::string pivot = "en";
  // Defaults to every taxonomy dimension of the manifest.
  std::vector<std::string> group_dims;
  std::optional<std::string> stratify;
  std::string out;
  bool wall_clock = false;
};

struct TheoryArgs {
  OracleConfig config;
  std::string out;
  bool wall_clock = false;
};

// SOURCE_DATE_EPOCH wins when set. Otherwise the wall clock is used only on
// request, so that reports stay byte-identical by default.
inline std::optional<std::string> ResolveTimestamp(bool wall_clock) {
  std::time_t seconds = 0;
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long value = std::strtoll(epoch, &end, 10);
    if (end == epoch || *end != '\0') {
      throw UsageError("SOURCE_DATE_EPOCH is not an integer: '" +
                       std::string(epoch) + "'");
    }
    seconds = static_cast<std::time_t>(value);
  } else if (wall_clock) {
    seconds = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
  } else {
    return std::nullopt;
  }
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string(buf);
}

namespace internal {

template <typename Body>
int RunGuarded(std::ostream& err, const char* command, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << command << ": usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << command << ": " << e.kind() << ": " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << "\n";
    return kExitInvalidInput;
  }
}

inline void PrintWarnings(std::ostream& err, const char* command,
                          const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) {
    err << command << ": warning: " << w << "\n";
  }
}

}  // namespace internal

inline int RunAuditIndividual(const IndividualAuditArgs& args,
                              std::ostream& err) {
  constexpr const char* kCommand = "audit-individual";
  return internal::RunGuarded(err, kCommand, [&] {
    if (args.lang_b.empty()) throw UsageError("--lang-b is required");
    if (args.lang_a == args.lang_b) {
      throw UsageError("--lang-a and --lang-b must differ");
    }
    const EmbeddingStore store = LoadEmbeddings(args.embeddings);
    const PairManifest manifest = LoadManifest(args.manifest, store);
    internal::PrintWarnings(err, kCommand, store.warnings);
    internal::PrintWarnings(err, kCommand, manifest.warnings);
    const std::vector<GroundedTriple> triples =
        AssembleTriples(manifest, store);
    const IndividualFairnessReport report =
        args.shuffle_seed
            ? ShuffledAudit(triples, args.lang_a, args.lang_b, *args.shuffle_seed)
            : RunIndividualAudit(triples, args.lang_a, args.lang_b);

    AuditReportEnvelope envelope;
    envelope.input_digests = {{"embeddings", FileDigest(args.embeddings)},
                              {"manifest", FileDigest(args.manifest)}};
    envelope.config = {{"lang_a", args.lang_a},
                       {"lang_b", args.lang_b},
                       {"shuffle_seed", args.shuffle_seed
                                            ? Json(*args.shuffle_seed)
                                            : Json(nullptr)}};
    envelope.timestamp = ResolveTimestamp(args.wall_clock);
    envelope.payload_type = "IndividualFairnessReport";
    envelope.payload = ToJson(report);

    const std::string kind =
        args.shuffle_seed ? "individual-shuffled" : "individual";
    WriteFilesAtomically(args.out,
                         {{kind + ".report.json", EmitJson(envelope)},
                          {kind + ".scatter.csv", EmitScatterTable(report)}});
    if (report.exact_bound_violations > 0) {
      err << kCommand << ": " << report.exact_bound_violations
          << " pair(s) exceed the exact similarity-gap bound\n";
      return kExitViolation;
    }
    return kExitOk;
  });
}

inline int RunAuditGroup(const GroupAuditArgs& args, std::ostream& err) {
  constexpr const char* kCommand = "audit-group";
  return internal::RunGuarded(err, kCommand, [&] {
    if (args.prompts.empty()) throw UsageError("--prompts is required");
    const EmbeddingStore store = LoadEmbeddings(args.embeddings);
    const PairManifest manifest = LoadManifest(args.manifest, store);
    const PromptSpec spec = LoadPromptSpec(args.prompts);
    const std::string prompt_path =
        args.prompt_embeddings.empty() ? args.embeddings : args.prompt_embeddings;
    const EmbeddingStore prompt_store = prompt_path == args.embeddings
                                            ? EmbeddingStore()
                                            : LoadEmbeddings(prompt_path);
    const EmbeddingStore& prompt_source =
        prompt_path == args.embeddings ? store : prompt_store;
    internal::PrintWarnings(err, kCommand, store.warnings);
    internal::PrintWarnings(err, kCommand, manifest.warnings);

    std::vector<std::string> languages =
        args.languages.empty() ? spec.Languages() : args.languages;
    if (std::find(languages.begin(), languages.end(), args.pivot) ==
        languages.end()) {
      throw PivotError("pivot language '" + args.pivot +
                       "' is not among the audited languages");
    }
    for (const std::string& lang : languages) {
      if (!spec.template_by_lang.contains(lang)) {
        throw PromptSpecError("language '" + lang +
                              "' has no template in the prompt spec");
      }
    }
    GroupAuditOptions options;
    options.languages = languages;
    if (args.group_dims.empty()) {
      for (const auto& [dim, unused] : manifest.taxonomy) {
        options.group_dims.push_back(dim);
      }
    } else {
      options.group_dims = args.group_dims;
    }
    options.stratify_dim = args.stratify;

    const PromptEmbeddingSet prompts =
        PromptEmbeddingsFromStore(spec, languages, prompt_source);
    const std::vector<ImageItem> images = AssembleImages(manifest, store);
    const OutcomeSet outcomes =
        RunZeroShot(images, prompts, spec, TruthFor(manifest, spec.dimension),
                    languages, manifest.taxonomy);
    const GroupFairnessReport report = RunGroupAudit(outcomes, options);
    internal::PrintWarnings(err, kCommand, report.warnings);

    AuditReportEnvelope envelope;
    envelope.input_digests = {{"embeddings", FileDigest(args.embeddings)},
                              {"manifest", FileDigest(args.manifest)},
                              {"prompts", FileDigest(args.prompts)},
                              {"prompt_embeddings", FileDigest(prompt_path)}};
    envelope.config = {{"languages", languages},
                       {"pivot", args.pivot},
                       {"group_dims", options.group_dims},
                       {"stratify", args.stratify ? Json(*args.stratify)
                                                  : Json(nullptr)},
                       {"classified_dimension", spec.dimension}};
    envelope.timestamp = ResolveTimestamp(args.wall_clock);
    envelope.payload_type = "GroupFairnessReport";
    envelope.payload = ToJson(report);

    std::map<std::string, std::string> files = {
        {"group.report.json", EmitJson(envelope)}};
    for (auto& [name, table] : EmitGroupTables(report, args.pivot)) {
      files["group." + name + ".csv"] = std::move(table);
    }
    WriteFilesAtomically(args.out, files);
    return kExitOk;
  });
}

inline int RunVerifyTheory(const TheoryArgs& args, std::ostream& err) {
  constexpr const char* kCommand = "verify-theory";
  return internal::RunGuarded(err, kCommand, [&] {
    try {
      ValidateOracleConfig(args.config);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    const OracleResult result = VerifyTheory(args.config);

    AuditReportEnvelope envelope;
    envelope.config = ToJson(args.config);
    envelope.timestamp = ResolveTimestamp(args.wall_clock);
    envelope.payload_type = "OracleResult";
    envelope.payload = ToJson(result);
    WriteFilesAtomically(args.out, {{"theory.report.json", EmitJson(envelope)}});

    for (const InequalityResult& r : result.results) {
      err << kCommand << ": " << r.id << ": " << r.violation_count << " of "
          << r.checked << " trials violated"
          << (r.exact ? "" : " (qualified check)") << "\n";
      for (const Violation& v : r.violations) {
        err << "  replay: trial " << v.trial << " seed " << v.trial_seed
            << " lhs " << FormatDouble(v.lhs) << " rhs " << FormatDouble(v.rhs)
            << " inputs " << Json(v.inputs).dump() << "\n";
      }
    }
    return result.ExactInequalitiesHold() ? kExitOk : kExitViolation;
  });
}

}  // namespace fairlens

#endif  // FAIRLENS_COMMANDS_HPP_
