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

#include "fairlens/ingest.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fairlens/random.hpp"

namespace fairlens {
namespace {

EmbeddingStore Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseEmbeddings(in, "test.embjsonl");
}

std::string ErrorMessage(const std::string& text) {
  try {
    Parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// Three images, en/de captions for each, dims 2.
const char* kStore =
    R"({"id":"img1","kind":"image","lang":null,"dim":2,"vec":[1.0,0.0]}
{"id":"img2","kind":"image","lang":null,"dim":2,"vec":[0.0,1.0]}
{"id":"img3","kind":"image","lang":null,"dim":2,"vec":[1.0,1.0]}
{"id":"en1","kind":"text","lang":"en","dim":2,"vec":[1.0,0.1]}
{"id":"de1","kind":"text","lang":"de","dim":2,"vec":[0.9,0.2]}
{"id":"en2","kind":"text","lang":"en","dim":2,"vec":[0.1,1.0]}
{"id":"de2","kind":"text","lang":"de","dim":2,"vec":[0.2,0.9]}
{"id":"en3","kind":"text","lang":"en","dim":2,"vec":[1.0,0.9]}
{"id":"de3","kind":"text","lang":"de","dim":2,"vec":[0.8,1.0]}
)";

PairManifest Manifest(const EmbeddingStore& store, const std::string& json) {
  return ParseManifest(nlohmann::json::parse(json), store, "manifest.json");
}

TEST(LoadEmbeddingsTest, ParsesRecords) {
  const EmbeddingStore store = Parse(kStore);
  ASSERT_EQ(store.size(), 9u);
  const EmbeddingRecord* de2 = store.Find("de2");
  ASSERT_NE(de2, nullptr);
  EXPECT_EQ(de2->kind, EmbeddingKind::kText);
  EXPECT_EQ(*de2->lang, "de");
  EXPECT_EQ(de2->vec, Vector({0.2, 0.9}));
  EXPECT_FALSE(store.Find("img1")->lang.has_value());
  EXPECT_EQ(store.Find("nope"), nullptr);
  EXPECT_TRUE(store.warnings.empty());
}

TEST(LoadEmbeddingsTest, EmptyInputGivesEmptyStoreWithWarning) {
  const EmbeddingStore store = Parse("");
  EXPECT_TRUE(store.empty());
  EXPECT_EQ(store.warnings.size(), 1u);
}

TEST(LoadEmbeddingsTest, ToleratesExtraKeysAndCrlf) {
  const EmbeddingStore store = Parse(
      "{\"id\":\"a\",\"kind\":\"image\",\"dim\":1,\"vec\":[2],\"model\":\"x\"}\r\n");
  EXPECT_EQ(store.Find("a")->vec, Vector({2.0}));
}

TEST(LoadEmbeddingsTest, NonFiniteComponentsAreInvalidVectors) {
  EXPECT_THROW(Parse(R"({"id":"a","kind":"image","dim":2,"vec":[NaN,1.0]})"),
               InvalidVectorError);
  EXPECT_THROW(Parse(R"({"id":"a","kind":"image","dim":2,"vec":[-Infinity,1.0]})"),
               InvalidVectorError);
  EXPECT_THROW(Parse(R"({"id":"a","kind":"image","dim":2,"vec":[null,1.0]})"),
               InvalidVectorError);
  EXPECT_THROW(Parse(R"({"id":"a","kind":"image","dim":2,"vec":[0.0,0.0]})"),
               InvalidVectorError);
  // "NaN" inside a string is left alone.
  EXPECT_NO_THROW(Parse(R"({"id":"NaN","kind":"image","dim":1,"vec":[1]})"));
}

TEST(LoadEmbeddingsTest, RejectsDuplicatesWithLineNumbers) {
  const std::string text =
      "{\"id\":\"a\",\"kind\":\"image\",\"dim\":1,\"vec\":[1]}\n"
      "{\"id\":\"a\",\"kind\":\"image\",\"dim\":1,\"vec\":[2]}\n";
  EXPECT_THROW(Parse(text), DuplicateIdError);
  EXPECT_NE(ErrorMessage(text).find("line 2"), std::string::npos);
}

TEST(LoadEmbeddingsTest, ReportsEveryBadLine) {
  const std::string text =
      "{\"id\":\"a\",\"kind\":\"image\",\"dim\":1,\"vec\":[1]}\n"
      "not json\n"
      "{\"id\":\"b\",\"kind\":\"audio\",\"dim\":1,\"vec\":[1]}\n"
      "{\"id\":\"c\",\"kind\":\"text\",\"lang\":\"EN\",\"dim\":1,\"vec\":[1]}\n"
      "{\"id\":\"d\",\"kind\":\"image\",\"dim\":3,\"vec\":[1,2]}\n"
      "{\"kind\":\"image\",\"dim\":1,\"vec\":[1]}\n"
      "{\"id\":\"e\",\"kind\":\"image\",\"dim\":1,\"vec\":[\"x\"]}\n";
  EXPECT_THROW(Parse(text), ParseError);
  const std::string message = ErrorMessage(text);
  for (const char* line : {"line 2", "line 3", "line 4", "line 5", "line 6", "line 7"}) {
    EXPECT_NE(message.find(line), std::string::npos) << line;
  }
  EXPECT_NE(message.find("6 validation error(s)"), std::string::npos);
}

TEST(LoadEmbeddingsTest, MissingFileIsParseError) {
  EXPECT_THROW(LoadEmbeddings("/nonexistent/x.embjsonl"), ParseError);
}

TEST(SerializeEmbeddingsTest, RoundTripIsByteIdentical) {
  Rng rng(51);
  std::ostringstream original;
  for (int i = 0; i < 1000; ++i) {
    EmbeddingRecord rec{"id" + std::to_string(i),
                        i % 3 == 0 ? EmbeddingKind::kImage : EmbeddingKind::kText,
                        std::nullopt, Vector({1.0})};
    if (rec.kind == EmbeddingKind::kText) rec.lang = i % 2 ? "de" : "en";
    std::vector<double> v(1 + rng.UniformIndex(64));
    for (double& x : v) x = rng.Normal() * std::pow(10.0, rng.UniformInt(-30, 30));
    rec.vec = Vector(std::move(v));
    original << SerializeEmbeddingRecord(rec) << '\n';
  }
  const EmbeddingStore loaded = Parse(original.str());
  std::ostringstream again;
  SerializeEmbeddings(loaded, again);
  EXPECT_EQ(again.str(), original.str());
  // And the vectors survived bit for bit.
  const EmbeddingStore reloaded = Parse(again.str());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded.records()[i].vec, reloaded.records()[i].vec);
  }
}

TEST(SerializeEmbeddingsTest, FieldOrderIsFixed) {
  const EmbeddingRecord rec{"t", EmbeddingKind::kText, "ja", Vector({0.5, -2.0})};
  EXPECT_EQ(SerializeEmbeddingRecord(rec),
            R"({"id":"t","kind":"text","lang":"ja","dim":2,"vec":[0.5,-2.0]})");
}

TEST(ParseManifestTest, PairsBecomeTriplesInOrder) {
  const EmbeddingStore store = Parse(kStore);
  const PairManifest m = Manifest(store, R"({
    "portion_tag": "translation",
    "pairs": [{"image_id": "img2", "texts": {"en": "en2", "de": "de2"}},
              {"image_id": "img1", "texts": {"en": "en1", "de": "de1"}},
              {"image_id": "img3", "texts": {"en": "en3", "de": "de3"}}]})");
  EXPECT_EQ(m.languages, (std::vector<std::string>{"de", "en"}));
  EXPECT_FALSE(m.ragged);
  const std::vector<GroundedTriple> triples = AssembleTriples(m, store);
  ASSERT_EQ(triples.size(), 3u);
  EXPECT_EQ(triples[0].image_id, "img2");
  EXPECT_EQ(triples[1].image_id, "img1");
  EXPECT_EQ(triples[0].portion_tag, "translation");
  EXPECT_EQ(triples[0].text_by_lang.at("de"), Vector({0.2, 0.9}));
}

TEST(ParseManifestTest, DanglingReferences) {
  const EmbeddingStore store = Parse(kStore);
  EXPECT_THROW(Manifest(store, R"({"pairs": [{"image_id": "img1",
      "texts": {"en": "en1", "de": "missing"}}]})"),
               DanglingReferenceError);
  EXPECT_THROW(Manifest(store, R"({"pairs": [{"image_id": "ghost"}]})"),
               DanglingReferenceError);
  EXPECT_THROW(Manifest(store, R"({"pairs": [{"image_id": "en1"}]})"),
               DanglingReferenceError);
  EXPECT_THROW(Manifest(store, R"({"pairs": [], "truth": {"ghost": "male"}})"),
               DanglingReferenceError);
}

TEST(ParseManifestTest, StructuralErrors) {
  const EmbeddingStore store = Parse(kStore);
  EXPECT_THROW(Manifest(store, R"({})"), ParseError);
  EXPECT_THROW(Manifest(store, R"([])"), ParseError);
  EXPECT_THROW(Manifest(store, R"({"pairs": [{"image_id": "img1"}, {"image_id": "img1"}]})"),
               DuplicateIdError);
  EXPECT_THROW(Manifest(store, R"({"pairs": [{"image_id": "img1",
      "texts": {"en": "de1"}}]})"),
               ManifestError);
}

TEST(ParseManifestTest, FaceDatasetShape) {
  const EmbeddingStore store = Parse(kStore);
  const PairManifest m = Manifest(store, R"({
    "taxonomy": {"gender": ["female", "male"],
                 "race": ["White", "Black"],
                 "age": ["0-2", "3-19", "20-49", "50-69", "70+"]},
    "pairs": [{"image_id": "img1"}, {"image_id": "img2"}],
    "groups": {"img1": {"gender": "female", "race": "Black", "age": "20-49"},
               "img2": {"gender": "male", "race": ["White"], "age": "70+"}},
    "truth": {"img1": "female", "img2": "male"}})");
  EXPECT_EQ(m.taxonomy.size(), 3u);
  EXPECT_EQ(m.taxonomy.at("age").size(), 5u);
  EXPECT_EQ(m.groups.at("img1").size(), 3u);
  EXPECT_TRUE(m.groups.at("img2").contains(GroupLabel{"race", "White"}));
  EXPECT_EQ(m.truth.at("img2"), "male");
  EXPECT_TRUE(m.languages.empty());
  const std::vector<ImageItem> images = AssembleImages(m, store);
  ASSERT_EQ(images.size(), 2u);
  EXPECT_EQ(images[1].groups.size(), 3u);
  EXPECT_THROW(AssembleTriples(m, store), MissingLanguageError);
}

TEST(ParseManifestTest, UndeclaredGroupValueIsTaxonomyError) {
  const EmbeddingStore store = Parse(kStore);
  EXPECT_THROW(Manifest(store, R"({"taxonomy": {"gender": ["female", "male"]},
      "pairs": [{"image_id": "img1"}],
      "groups": {"img1": {"gender": "other"}}})"),
               TaxonomyError);
  EXPECT_THROW(Manifest(store, R"({"taxonomy": {"gender": []}, "pairs": []})"),
               TaxonomyError);
}

TEST(ParseManifestTest, TaxonomyInferredFromGroups) {
  const EmbeddingStore store = Parse(kStore);
  const PairManifest m = Manifest(store, R"({"pairs": [{"image_id": "img1"}],
      "groups": {"img2": {"gender": "male"}, "img1": {"gender": "female"}}})");
  EXPECT_EQ(m.taxonomy.at("gender"), (std::vector<std::string>{"female", "male"}));
  const auto truth = TruthFor(m, "gender");
  EXPECT_EQ(truth.at("img1"), "female");
  EXPECT_EQ(truth.at("img2"), "male");
  EXPECT_TRUE(TruthFor(m, "age").empty());
}

TEST(ParseManifestTest, RaggedLanguagesAreFlagged) {
  const EmbeddingStore store = Parse(kStore);
  const PairManifest m = Manifest(store, R"({"pairs": [
      {"image_id": "img1", "texts": {"en": "en1", "de": "de1"}},
      {"image_id": "img2", "texts": {"en": "en2"}}]})");
  EXPECT_TRUE(m.ragged);
  EXPECT_EQ(m.warnings.size(), 1u);
  EXPECT_THROW(AssembleTriples(m, store), MissingLanguageError);
}

TEST(AssembleTriplesTest, DimensionMismatchThrows) {
  const EmbeddingStore store = Parse(std::string(kStore) +
      R"({"id":"en4","kind":"text","lang":"en","dim":3,"vec":[1,0,0]})" "\n");
  const PairManifest m = Manifest(store, R"({"pairs": [
      {"image_id": "img1", "texts": {"en": "en4", "de": "de1"}}]})");
  EXPECT_THROW(AssembleTriples(m, store), DimensionError);
}

TEST(PromptSpecTest, ParsesValidatesAndRoundTrips) {
  const auto doc = nlohmann::json::parse(R"({"dimension": "gender",
      "labels": ["female", "male"],
      "templates": {"en": "A photo of a {label}", "de": "Ein Foto von einer {label}"},
      "surfaces": {"en": {"female": "woman", "male": "man"},
                   "de": {"female": "Frau", "male": "Mann"}}})");
  const PromptSpec spec = ParsePromptSpec(doc);
  EXPECT_EQ(spec.Languages(), (std::vector<std::string>{"de", "en"}));
  EXPECT_EQ(RenderPrompts(spec, "en")[0].second, "A photo of a woman");
  const PromptSpec again = ParsePromptSpec(nlohmann::json::parse(PromptSpecToJson(spec).dump()));
  EXPECT_EQ(again.labels, spec.labels);
  EXPECT_EQ(again.surface_by_lang, spec.surface_by_lang);

  auto bad = doc;
  bad["surfaces"]["de"].erase("male");
  EXPECT_THROW(ParsePromptSpec(bad), PromptSpecError);
  bad = doc;
  bad["templates"]["DE"] = "x {label}";
  EXPECT_THROW(ParsePromptSpec(bad), PromptSpecError);
  bad = doc;
  bad.erase("labels");
  EXPECT_THROW(ParsePromptSpec(bad), ParseError);
}

TEST(PromptSpecTest, PromptEmbeddingsResolveByConventionalId) {
  PromptSpec spec = DefaultPromptSpec("gender");
  spec.template_by_lang["ja"] = "{label}の写真";
  spec.surface_by_lang["ja"] = {{"female", "女性"}, {"male", "男性"}};
  EXPECT_EQ(PromptEmbeddingId("gender", "ja", "female"), "prompt/gender/ja/female");
  const std::string records =
      R"({"id":"prompt/gender/en/female","kind":"text","lang":"en","dim":2,"vec":[1,0]}
{"id":"prompt/gender/en/male","kind":"text","lang":"en","dim":2,"vec":[0,1]}
{"id":"prompt/gender/ja/male","kind":"text","lang":"ja","dim":2,"vec":[0,1]}
)";
  const EmbeddingStore store = Parse(records);
  const std::vector<std::string> en = {"en"};
  const PromptEmbeddingSet set = PromptEmbeddingsFromStore(spec, en, store);
  EXPECT_EQ(Classify(Vector({0.2, 0.9}), set, "en"), "male");
  const std::vector<std::string> en_ja = {"en", "ja"};
  try {
    PromptEmbeddingsFromStore(spec, en_ja, store);
    FAIL();
  } catch (const PromptSpecError& e) {
    EXPECT_NE(std::string(e.what()).find("(ja, female)"), std::string::npos);
  }
}

}  // namespace
}  // namespace fairlens
