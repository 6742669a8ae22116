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

// fairlens: multilingual fairness audits over precomputed embeddings.
//
//   fairlens audit-individual --embeddings E --manifest M --lang-b de --out D
//   fairlens audit-group --embeddings E --manifest M --prompts P --out D
//   fairlens verify-theory --seed 1 --trials 100000 --out D

#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "fairlens/commands.hpp"

namespace {

// Parses "lo:hi".
template <typename T>
std::pair<T, T> ParseRange(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  auto parse = [&](std::string_view part) {
    T value{};
    auto [end, ec] =
        std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || end != part.data() + part.size()) {
      throw fairlens::UsageError(std::string(flag) + " expects lo:hi, got '" +
                                 text + "'");
    }
    return value;
  };
  if (colon == std::string::npos) {
    throw fairlens::UsageError(std::string(flag) + " expects lo:hi, got '" +
                               text + "'");
  }
  const std::string_view view(text);
  return {parse(view.substr(0, colon)), parse(view.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual fairness audits over precomputed embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fairlens::kToolVersion);

  fairlens::IndividualAuditArgs individual;
  std::optional<std::uint64_t> shuffle;
  auto* ind = app.add_subcommand(
      "audit-individual",
      "Similarity-gap vs caption-distance audit for one language pair");
  ind->add_option("--embeddings", individual.embeddings, "Embeddings (.embjsonl)")
      ->required();
  ind->add_option("--manifest", individual.manifest, "Pair manifest (.json)")
      ->required();
  ind->add_option("--lang-a", individual.lang_a, "Reference language")
      ->capture_default_str();
  ind->add_option("--lang-b", individual.lang_b, "Compared language")
      ->required();
  ind->add_option("--shuffle", shuffle,
                  "Pair captions with images of other triples, seeded");
  ind->add_option("--out", individual.out, "Output directory")->required();
  ind->add_flag("--timestamp", individual.wall_clock,
                "Record wall-clock time in the report");

  fairlens::GroupAuditArgs group;
  std::string stratify;
  auto* grp = app.add_subcommand(
      "audit-group", "Zero-shot classification followed by group audits");
  grp->add_option("--embeddings", group.embeddings, "Image embeddings (.embjsonl)")
      ->required();
  grp->add_option("--manifest", group.manifest, "Manifest with groups/truth")
      ->required();
  grp->add_option("--prompts", group.prompts, "Prompt spec (.json)")
      ->required();
  grp->add_option("--prompt-embeddings", group.prompt_embeddings,
                  "Prompt embeddings (.embjsonl); defaults to --embeddings");
  grp->add_option("--languages", group.languages,
                  "Languages to audit; defaults to the prompt spec's")
      ->delimiter(',');
  grp->add_option("--pivot", group.pivot, "Pivot language")
      ->capture_default_str();
  grp->add_option("--group-dims", group.group_dims,
                  "Group dimensions; defaults to the manifest taxonomy")
      ->delimiter(',');
  grp->add_option("--stratify", stratify,
                  "Break binary-dimension disparities down by this dimension");
  grp->add_option("--out", group.out, "Output directory")->required();
  grp->add_flag("--timestamp", group.wall_clock,
                "Record wall-clock time in the report");

  fairlens::TheoryArgs theory;
  std::string dims = "2:512";
  std::string rho_range = "0.001:0.99";
  auto* thr = app.add_subcommand(
      "verify-theory", "Randomized check of the similarity and accuracy bounds");
  thr->add_option("--seed", theory.config.seed, "Base seed")
      ->capture_default_str();
  thr->add_option("--trials", theory.config.trials, "Trials per inequality")
      ->capture_default_str();
  thr->add_option("--dims", dims, "Dimension range min:max")
      ->capture_default_str();
  thr->add_option("--rho-range", rho_range,
                  "Ball radius range as fractions of the text norm, lo:hi")
      ->capture_default_str();
  thr->add_option("--tolerance", theory.config.tolerance,
                  "Absolute tolerance on lhs <= rhs")
      ->capture_default_str();
  thr->add_option("--out", theory.out, "Output directory")->required();
  thr->add_flag("--timestamp", theory.wall_clock,
                "Record wall-clock time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fairlens::kExitUsage;
  }

  if (ind->parsed()) {
    individual.shuffle_seed = shuffle;
    return fairlens::RunAuditIndividual(individual, std::cerr);
  }
  if (grp->parsed()) {
    if (!stratify.empty()) group.stratify = stratify;
    return fairlens::RunAuditGroup(group, std::cerr);
  }
  try {
    std::tie(theory.config.dim_min, theory.config.dim_max) =
        ParseRange<std::size_t>(dims, "--dims");
    std::tie(theory.config.rho_fraction_lo, theory.config.rho_fraction_hi) =
        ParseRange<double>(rho_range, "--rho-range");
  } catch (const fairlens::UsageError& e) {
    std::cerr << "verify-theory: usage error: " << e.what() << "\n";
    return fairlens::kExitUsage;
  }
  return fairlens::RunVerifyTheory(theory, std::cerr);
}
