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

#include "fairlens/zeroshot.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fairlens/random.hpp"

namespace fairlens {
namespace {

Vector RandomVector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.Normal();
  return Vector(std::move(v));
}

PromptSpec GenderSpec() {
  PromptSpec spec = DefaultPromptSpec("gender");
  spec.template_by_lang["de"] = "Ein Foto von einer {label}";
  spec.surface_by_lang["de"] = {{"female", "Frau"}, {"male", "Mann"}};
  return spec;
}

PromptEmbeddingSet FromMap(const PromptSpec& spec,
                           const std::vector<std::string>& languages,
                           const std::map<std::string, Vector>& by_label) {
  return PromptEmbeddingSet::Build(
      spec, languages,
      [&](const std::string&, const std::string& label) -> std::optional<Vector> {
        auto it = by_label.find(label);
        if (it == by_label.end()) return std::nullopt;
        return it->second;
      });
}

TEST(RenderPromptsTest, PublishedEnglishStrings) {
  const auto gender = RenderPrompts(DefaultPromptSpec("gender"), "en");
  ASSERT_EQ(gender.size(), 2u);
  EXPECT_EQ(gender[0].first, "female");
  EXPECT_EQ(gender[0].second, "A photo of a woman");
  EXPECT_EQ(gender[1].second, "A photo of a man");

  const auto age = RenderPrompts(DefaultPromptSpec("age"), "en");
  ASSERT_EQ(age.size(), 5u);
  EXPECT_EQ(age[2].first, "20-49");
  EXPECT_EQ(age[2].second, "A photo of a person aged 20 to 49 years");

  const auto race = RenderPrompts(DefaultPromptSpec("race"), "en");
  ASSERT_EQ(race.size(), 7u);
  EXPECT_EQ(race[0].second, "A photo of a(n) White person");
  EXPECT_EQ(race[2].first, "Indian");
  EXPECT_EQ(race[2].second, "A photo of a(n) South Eastern person");
}

TEST(RenderPromptsTest, OtherLanguagesComeFromData) {
  const auto de = RenderPrompts(GenderSpec(), "de");
  EXPECT_EQ(de[0].second, "Ein Foto von einer Frau");
  EXPECT_THROW(RenderPrompts(GenderSpec(), "ja"), PromptSpecError);
  EXPECT_THROW(DefaultPromptSpec("height"), PromptSpecError);
}

TEST(ValidatePromptSpecTest, RejectsMalformedSpecs) {
  EXPECT_NO_THROW(ValidatePromptSpec(GenderSpec()));
  PromptSpec missing_surface = GenderSpec();
  missing_surface.surface_by_lang["de"].erase("male");
  EXPECT_THROW(ValidatePromptSpec(missing_surface), PromptSpecError);
  EXPECT_THROW(RenderPrompts(missing_surface, "de"), PromptSpecError);
  PromptSpec two_slots = GenderSpec();
  two_slots.template_by_lang["en"] = "{label} and {label}";
  EXPECT_THROW(ValidatePromptSpec(two_slots), PromptSpecError);
  PromptSpec no_slot = GenderSpec();
  no_slot.template_by_lang["en"] = "A photo";
  EXPECT_THROW(ValidatePromptSpec(no_slot), PromptSpecError);
  PromptSpec no_labels = GenderSpec();
  no_labels.labels.clear();
  EXPECT_THROW(ValidatePromptSpec(no_labels), PromptSpecError);
  PromptSpec duplicate = GenderSpec();
  duplicate.labels.push_back("female");
  EXPECT_THROW(ValidatePromptSpec(duplicate), PromptSpecError);
}

TEST(PromptEmbeddingSetTest, BuildRejectsGapsAndDimMismatch) {
  const PromptSpec spec = GenderSpec();
  const std::vector<std::string> langs = {"en", "de"};
  EXPECT_THROW(FromMap(spec, langs, {{"female", Vector({1.0, 0.0})}}),
               PromptSpecError);
  EXPECT_THROW(FromMap(spec, langs,
                       {{"female", Vector({1.0, 0.0})},
                        {"male", Vector({1.0, 0.0, 0.0})}}),
               PromptSpecError);
  const PromptEmbeddingSet set = FromMap(
      spec, langs, {{"female", Vector({1.0, 0.0})}, {"male", Vector({0.0, 1.0})}});
  EXPECT_EQ(set.dim(), 2u);
  EXPECT_TRUE(set.HasLanguage("de"));
  EXPECT_FALSE(set.HasLanguage("ja"));
  EXPECT_THROW(set.Candidates("ja"), PromptSpecError);
}

TEST(ClassifyTest, PicksNearestPromptAndBreaksTiesByLabelOrder) {
  const PromptSpec spec = GenderSpec();
  const std::vector<std::string> langs = {"en"};
  const PromptEmbeddingSet set = FromMap(
      spec, langs, {{"female", Vector({1.0, 0.0})}, {"male", Vector({0.0, 1.0})}});
  EXPECT_EQ(Classify(Vector({0.0, 3.0}), set, "en"), "male");
  EXPECT_EQ(Classify(Vector({1.0, 1.0}), set, "en"), "female");
  EXPECT_THROW(Classify(Vector({1.0, 1.0, 1.0}), set, "en"), DimensionError);
}

TEST(ClassifyTest, MatchesExhaustiveScanAndIsScaleInvariant) {
  const PromptSpec spec = DefaultPromptSpec("race");
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 2 + rng.UniformIndex(30);
    std::map<std::string, Vector> prompts;
    for (const std::string& label : spec.labels) {
      prompts.emplace(label, RandomVector(rng, dim));
    }
    const PromptEmbeddingSet set = FromMap(spec, {"en"}, prompts);
    std::map<std::string, Vector> rescaled;
    for (const auto& [label, v] : prompts) {
      rescaled.emplace(label, Scaled(v, rng.Uniform(0.1, 10.0)));
    }
    const PromptEmbeddingSet scaled_set = FromMap(spec, {"en"}, rescaled);
    const Vector image = RandomVector(rng, dim);

    std::string best;
    double best_score = -2.0;
    for (const std::string& label : spec.labels) {
      const Vector& p = prompts.at(label);
      double dot = 0, nn = 0, pp = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        dot += image[i] * p[i];
        nn += image[i] * image[i];
        pp += p[i] * p[i];
      }
      const double score = dot / std::sqrt(nn * pp);
      if (score > best_score) {
        best_score = score;
        best = label;
      }
    }
    EXPECT_EQ(Classify(image, set, "en"), best);
    EXPECT_EQ(Classify(Scaled(image, 4.0), scaled_set, "en"), best);
  }
}

class RunZeroShotTest : public ::testing::Test {
 protected:
  const PromptSpec spec_ = GenderSpec();
  const std::vector<std::string> langs_ = {"en", "de"};
  const Taxonomy taxonomy_ = {{"gender", {"female", "male"}}};
  const GroupLabel female_{"gender", "female"};
  const GroupLabel male_{"gender", "male"};
};

TEST_F(RunZeroShotTest, PerfectTruthGivesFullAccuracy) {
  const PromptEmbeddingSet set = FromMap(
      spec_, langs_, {{"female", Vector({1.0, 0.0})}, {"male", Vector({0.0, 1.0})}});
  const std::vector<ImageItem> images = {{"a", Vector({2.0, 0.1}), {female_}},
                                         {"b", Vector({0.1, 2.0}), {male_}}};
  const OutcomeSet out = RunZeroShot(images, set, spec_, {{"a", "female"}, {"b", "male"}},
                                     langs_, taxonomy_);
  EXPECT_EQ(out.records().size(), images.size() * langs_.size());
  EXPECT_EQ(Accuracy(out, "en"), 1.0);
  EXPECT_EQ(Accuracy(out, "de"), 1.0);
  EXPECT_EQ(out.records()[0].item_id, "a");
  EXPECT_EQ(out.records()[1].item_id, "a");
  EXPECT_EQ(out.records()[1].language, "de");
}

TEST_F(RunZeroShotTest, IdenticalPromptsAlwaysPickFirstLabel) {
  const PromptEmbeddingSet set = FromMap(
      spec_, langs_, {{"female", Vector({1.0, 1.0})}, {"male", Vector({1.0, 1.0})}});
  const std::vector<ImageItem> images = {{"a", Vector({0.0, 1.0}), {male_}},
                                         {"b", Vector({1.0, 0.0}), {male_}}};
  const OutcomeSet out =
      RunZeroShot(images, set, spec_, {{"a", "male"}, {"b", "female"}}, langs_, taxonomy_);
  for (const OutcomeRecord& r : out.records()) {
    EXPECT_EQ(r.correct, r.item_id == "b");
  }
}

TEST_F(RunZeroShotTest, MissingOrUnknownTruthThrows) {
  const PromptEmbeddingSet set = FromMap(
      spec_, langs_, {{"female", Vector({1.0, 0.0})}, {"male", Vector({0.0, 1.0})}});
  const std::vector<ImageItem> images = {{"a", Vector({1.0, 0.0}), {female_}}};
  EXPECT_THROW(RunZeroShot(images, set, spec_, {}, langs_, taxonomy_), ManifestError);
  EXPECT_THROW(RunZeroShot(images, set, spec_, {{"a", "other"}}, langs_, taxonomy_),
               ManifestError);
}

TEST_F(RunZeroShotTest, SeparableClustersMatchRecount) {
  Rng rng(42);
  const PromptEmbeddingSet set = FromMap(
      spec_, langs_,
      {{"female", Vector({1.0, 0.0, 0.0})}, {"male", Vector({0.0, 1.0, 0.0})}});
  std::vector<ImageItem> images;
  std::map<std::string, std::string> truth;
  int expected_correct = 0;
  for (int i = 0; i < 400; ++i) {
    const bool is_female = rng.Bernoulli(0.5);
    std::vector<double> v = {is_female ? 1.0 : 0.0, is_female ? 0.0 : 1.0, 0.2};
    for (double& x : v) x += 0.6 * rng.Normal();
    const std::string id = "img" + std::to_string(i);
    truth[id] = is_female ? "female" : "male";
    expected_correct += (v[0] >= v[1]) == is_female;
    images.push_back({id, Vector(v), {is_female ? female_ : male_}});
  }
  const OutcomeSet out = RunZeroShot(images, set, spec_, truth, langs_, taxonomy_);
  EXPECT_EQ(Accuracy(out, "en"), expected_correct / 400.0);

  // Permuting images permutes outcomes.
  std::vector<ImageItem> reversed(images.rbegin(), images.rend());
  const OutcomeSet back = RunZeroShot(reversed, set, spec_, truth, langs_, taxonomy_);
  auto key = [](const OutcomeRecord& r) {
    return std::tuple(r.item_id, r.language, r.correct);
  };
  std::vector<std::tuple<std::string, std::string, bool>> a, b;
  for (const auto& r : out.records()) a.push_back(key(r));
  for (const auto& r : back.records()) b.push_back(key(r));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace fairlens
