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

// Zero-shot classification with prompt templates.
//
// A PromptSpec turns labels into prompt strings per language. The strings are
// embedded elsewhere; this module only consumes the resulting vectors, picks
// the label whose prompt is most cosine-similar to each image, and records
// whether that matches the ground truth.

#ifndef FAIRLENS_ZEROSHOT_HPP_
#define FAIRLENS_ZEROSHOT_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairlens/errors.hpp"
#include "fairlens/group_fairness.hpp"
#include "fairlens/parallel.hpp"
#include "fairlens/vector.hpp"

namespace fairlens {

inline constexpr const char* kLabelSlot = "{label}";

struct PromptSpec {
  std::string dimension;
  // Canonical order; classification ties resolve to the earliest label.
  std::vector<std::string> labels;
  std::map<std::string, std::string> template_by_lang;
  std::map<std::string, std::map<std::string, std::string>> surface_by_lang;

  std::vector<std::string> Languages() const {
    std::vector<std::string> out;
    for (const auto& [lang, unused] : template_by_lang) out.push_back(lang);
    return out;
  }
};

namespace internal {

inline std::size_t CountSlots(const std::string& text) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(kLabelSlot); pos != std::string::npos;
       pos = text.find(kLabelSlot, pos + 1)) {
    ++count;
  }
  return count;
}

}  // namespace internal

// Throws PromptSpecError on an empty label list, a template without exactly
// one slot, or a label lacking a surface form in some declared language.
inline void ValidatePromptSpec(const PromptSpec& spec) {
  if (spec.dimension.empty()) throw PromptSpecError("prompt spec has no dimension");
  if (spec.labels.empty()) {
    throw PromptSpecError("prompt spec '" + spec.dimension + "' has no labels");
  }
  std::set<std::string> seen;
  for (const std::string& label : spec.labels) {
    if (!seen.insert(label).second) {
      throw PromptSpecError("duplicate label '" + label + "'");
    }
  }
  if (spec.template_by_lang.empty()) {
    throw PromptSpecError("prompt spec '" + spec.dimension + "' has no templates");
  }
  for (const auto& [lang, tmpl] : spec.template_by_lang) {
    if (internal::CountSlots(tmpl) != 1) {
      throw PromptSpecError("template for '" + lang +
                            "' must contain exactly one " + kLabelSlot +
                            " slot: \"" + tmpl + "\"");
    }
    auto surfaces = spec.surface_by_lang.find(lang);
    for (const std::string& label : spec.labels) {
      if (surfaces == spec.surface_by_lang.end() ||
          !surfaces->second.contains(label)) {
        throw PromptSpecError("no surface form for label '" + label +
                              "' in language '" + lang + "'");
      }
    }
  }
}

// (label, prompt) pairs in label order.
inline std::vector<std::pair<std::string, std::string>> RenderPrompts(
    const PromptSpec& spec, const std::string& language) {
  auto tmpl = spec.template_by_lang.find(language);
  if (tmpl == spec.template_by_lang.end()) {
    throw PromptSpecError("language '" + language +
                          "' is not declared in prompt spec '" +
                          spec.dimension + "'");
  }
  const std::size_t slot = tmpl->second.find(kLabelSlot);
  if (slot == std::string::npos || internal::CountSlots(tmpl->second) != 1) {
    throw PromptSpecError("template for '" + language +
                          "' must contain exactly one slot");
  }
  auto surfaces = spec.surface_by_lang.find(language);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(spec.labels.size());
  for (const std::string& label : spec.labels) {
    if (surfaces == spec.surface_by_lang.end() ||
        !surfaces->second.contains(label)) {
      throw PromptSpecError("no surface form for label '" + label +
                            "' in language '" + language + "'");
    }
    std::string prompt = tmpl->second;
    prompt.replace(slot, std::string(kLabelSlot).size(),
                   surfaces->second.at(label));
    out.emplace_back(label, std::move(prompt));
  }
  return out;
}

// English defaults for the three face-attribute dimensions ("gender", "race",
// "age"). Other languages are supplied as data.
inline PromptSpec DefaultPromptSpec(const std::string& dimension) {
  PromptSpec spec;
  spec.dimension = dimension;
  if (dimension == "gender") {
    spec.labels = {"female", "male"};
    spec.template_by_lang["en"] = "A photo of a {label}";
    spec.surface_by_lang["en"] = {{"female", "woman"}, {"male", "man"}};
  } else if (dimension == "race") {
    spec.labels = {"White",           "Black",          "Indian", "East Asian",
                   "Southeast Asian", "Middle Eastern", "Latino"};
    spec.template_by_lang["en"] = "A photo of a(n) {label} person";
    auto& en = spec.surface_by_lang["en"];
    for (const std::string& label : spec.labels) en[label] = label;
    // "Indian" is ambiguous in English prompts.
    en["Indian"] = "South Eastern";
  } else if (dimension == "age") {
    spec.labels = AgeBuckets();
    spec.template_by_lang["en"] = "A photo of a person aged {label} years";
    spec.surface_by_lang["en"] = {{"0-2", "0 to 2"},
                                  {"3-19", "3 to 19"},
                                  {"20-49", "20 to 49"},
                                  {"50-69", "50 to 69"},
                                  {"70+", "more than 70"}};
  } else {
    throw PromptSpecError("no default prompt spec for dimension '" +
                          dimension + "'");
  }
  return spec;
}

// Prompt vectors keyed by (language, label), complete over the grid.
class PromptEmbeddingSet {
 public:
  using Lookup = std::function<std::optional<Vector>(
      const std::string& lang, const std::string& label)>;

  // Pulls one vector per (language, label) from `lookup`. Missing entries and
  // dimension mismatches are PromptSpecErrors.
  static PromptEmbeddingSet Build(const PromptSpec& spec,
                                  std::span<const std::string> languages,
                                  const Lookup& lookup) {
    PromptEmbeddingSet set;
    set.labels_ = spec.labels;
    for (const std::string& lang : languages) {
      for (const std::string& label : spec.labels) {
        std::optional<Vector> vec = lookup(lang, label);
        if (!vec) {
          throw PromptSpecError("missing prompt embedding for (" + lang + ", " +
                                label + ")");
        }
        if (set.dim_ == 0) set.dim_ = vec->dim();
        if (vec->dim() != set.dim_) {
          throw PromptSpecError("prompt embedding for (" + lang + ", " + label +
                                ") has dim " + std::to_string(vec->dim()) +
                                ", expected " + std::to_string(set.dim_));
        }
        set.by_lang_[lang].push_back(std::move(*vec));
      }
    }
    return set;
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool HasLanguage(const std::string& lang) const {
    return by_lang_.contains(lang);
  }

  // Prompt vectors for `lang` in label order.
  std::span<const Vector> Candidates(const std::string& lang) const {
    auto it = by_lang_.find(lang);
    if (it == by_lang_.end()) {
      throw PromptSpecError("no prompt embeddings for language '" + lang + "'");
    }
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::vector<Vector>> by_lang_;
  std::size_t dim_ = 0;
};

inline const std::string& Classify(const Vector& image,
                                   const PromptEmbeddingSet& prompts,
                                   const std::string& language) {
  if (image.dim() != prompts.dim()) {
    throw DimensionError("image dim " + std::to_string(image.dim()) +
                         " does not match prompt dim " +
                         std::to_string(prompts.dim()));
  }
  return prompts.labels()[ArgmaxSimilarity(image, prompts.Candidates(language))];
}

struct ImageItem {
  std::string id;
  Vector vec;
  std::set<GroupLabel> groups;
};

// One outcome per (image, language), image-major in input order.
inline OutcomeSet RunZeroShot(std::span<const ImageItem> images,
                              const PromptEmbeddingSet& prompts,
                              const PromptSpec& spec,
                              const std::map<std::string, std::string>& truth,
                              std::span<const std::string> languages,
                              const Taxonomy& taxonomy) {
  const std::set<std::string> known(spec.labels.begin(), spec.labels.end());
  for (const ImageItem& image : images) {
    auto it = truth.find(image.id);
    if (it == truth.end()) {
      throw ManifestError("no ground-truth " + spec.dimension +
                          " label for image '" + image.id + "'");
    }
    if (!known.contains(it->second)) {
      throw ManifestError("ground-truth label '" + it->second + "' of image '" +
                          image.id + "' is not a " + spec.dimension + " label");
    }
  }
  const std::size_t n_lang = languages.size();
  std::vector<char> correct(images.size() * n_lang);
  ParallelFor(images.size(), [&](std::size_t i) {
    try {
      for (std::size_t k = 0; k < n_lang; ++k) {
        correct[i * n_lang + k] =
            Classify(images[i].vec, prompts, languages[k]) ==
            truth.at(images[i].id);
      }
    } catch (Error& e) {
      e.Prepend("image '" + images[i].id + "'");
      throw;
    }
  });

  OutcomeSet outcomes(taxonomy);
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t k = 0; k < n_lang; ++k) {
      outcomes.Add({images[i].id, languages[k], images[i].groups,
                    correct[i * n_lang + k] != 0});
    }
  }
  return outcomes;
}

}  // namespace fairlens

#endif  // FAIRLENS_ZEROSHOT_HPP_
