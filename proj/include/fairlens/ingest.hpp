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

// Input formats.
//
// Embeddings (*.embjsonl): one JSON object per line,
//
//   {"id":"img_0001","kind":"image","lang":null,"dim":3,"vec":[0.1,0.2,0.3]}
//   {"id":"txt_de_0001","kind":"text","lang":"de","dim":3,"vec":[...]}
//
// Extra keys are ignored. Bare NaN / Infinity tokens, as written by some JSON
// encoders, are accepted by the parser and then rejected as invalid vectors.
// Prompt embeddings are text records with id "prompt/<dimension>/<lang>/<label>".
//
// Manifest (manifest.json):
//
//   {
//     "portion_tag": "translation",
//     "taxonomy": {"gender": ["female", "male"], ...},
//     "pairs": [{"image_id": "img_0001",
//                "texts": {"en": "txt_en_0001", "de": "txt_de_0001"}}],
//     "groups": {"img_0001": {"gender": "female", "race": ["Black"]}},
//     "truth": {"img_0001": "female"}
//   }
//
// Only "pairs" is required. "texts" may be omitted for image-only datasets.
// Group values may be a string or a list of strings. Without "taxonomy" the
// dimensions and values are collected from "groups", scanning images in id
// order.
//
// Prompt spec (prompts.json):
//
//   {"dimension": "gender", "labels": ["female", "male"],
//    "templates": {"en": "A photo of a {label}"},
//    "surfaces": {"en": {"female": "woman", "male": "man"}}}
//
// Every loader validates the whole input and reports all problems at once;
// nothing is returned from a partially valid file.

#ifndef FAIRLENS_INGEST_HPP_
#define FAIRLENS_INGEST_HPP_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fairlens/errors.hpp"
#include "fairlens/group_fairness.hpp"
#include "fairlens/individual_fairness.hpp"
#include "fairlens/vector.hpp"
#include "fairlens/zeroshot.hpp"

namespace fairlens {

enum class EmbeddingKind { kImage, kText };

inline const char* ToString(EmbeddingKind kind) {
  return kind == EmbeddingKind::kImage ? "image" : "text";
}

struct EmbeddingRecord {
  std::string id;
  EmbeddingKind kind = EmbeddingKind::kImage;
  std::optional<std::string> lang;
  Vector vec;

  std::size_t dim() const { return vec.dim(); }
};

class EmbeddingStore {
 public:
  void Add(EmbeddingRecord record) {
    if (index_.contains(record.id)) {
      throw DuplicateIdError("duplicate embedding id '" + record.id + "'");
    }
    index_.emplace(record.id, records_.size());
    records_.push_back(std::move(record));
  }

  const EmbeddingRecord* Find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &records_[it->second];
  }

  const std::vector<EmbeddingRecord>& records() const noexcept {
    return records_;
  }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  std::vector<std::string> warnings;

 private:
  std::vector<EmbeddingRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline bool IsLanguageTag(const std::string& tag) {
  if (tag.size() < 2 || tag.size() > 3) return false;
  for (char c : tag) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

namespace internal {

struct Diagnostic {
  std::string kind;
  std::string message;
};

[[noreturn]] inline void ThrowDiagnostics(const std::string& source,
                                          const std::vector<Diagnostic>& diags) {
  std::string message = source + ": " + std::to_string(diags.size()) +
                        " validation error(s)";
  for (const Diagnostic& d : diags) message += "\n  " + d.message;
  const std::string& kind = diags.front().kind;
  if (kind == "DuplicateIdError") throw DuplicateIdError(message);
  if (kind == "InvalidVectorError") throw InvalidVectorError(message);
  if (kind == "DanglingReferenceError") throw DanglingReferenceError(message);
  if (kind == "TaxonomyError") throw TaxonomyError(message);
  if (kind == "ManifestError") throw ManifestError(message);
  if (kind == "PromptSpecError") throw PromptSpecError(message);
  throw ParseError(message);
}

// Replaces bare NaN, Infinity and -Infinity tokens outside strings with null.
inline std::string NullifyNonFiniteTokens(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < line.size()) {
        out += line[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    auto matches = [&](const char* token) {
      return line.compare(i, std::char_traits<char>::length(token), token) == 0;
    };
    if (matches("-Infinity")) {
      out += "null";
      i += 8;
    } else if (matches("Infinity")) {
      out += "null";
      i += 7;
    } else if (matches("NaN")) {
      out += "null";
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline nlohmann::json ParseJsonDocument(const std::string& text,
                                        const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

// Parses one embjsonl line. Appends to `diags` and returns nullopt on error.
inline std::optional<EmbeddingRecord> ParseEmbeddingLine(
    const std::string& line, std::size_t line_no,
    std::vector<Diagnostic>& diags) {
  const std::string where = "line " + std::to_string(line_no);
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(NullifyNonFiniteTokens(line));
  } catch (const nlohmann::json::parse_error& e) {
    diags.push_back({"ParseError", where + ": malformed JSON: " + e.what()});
    return std::nullopt;
  }
  auto fail = [&](const std::string& kind, const std::string& what) {
    diags.push_back({kind, where + ": " + what});
    return std::nullopt;
  };
  if (!obj.is_object()) return fail("ParseError", "record is not an object");
  if (!obj.contains("id") || !obj["id"].is_string() ||
      obj["id"].get<std::string>().empty()) {
    return fail("ParseError", "missing or empty string field 'id'");
  }
  EmbeddingRecord record{obj["id"].get<std::string>(), EmbeddingKind::kImage,
                         std::nullopt, Vector{1.0}};
  const std::string rec = where + " (id '" + record.id + "')";
  auto fail_rec = [&](const std::string& kind, const std::string& what) {
    diags.push_back({kind, rec + ": " + what});
    return std::nullopt;
  };

  const auto kind = obj.value("kind", nlohmann::json());
  if (kind == "image") {
    record.kind = EmbeddingKind::kImage;
  } else if (kind == "text") {
    record.kind = EmbeddingKind::kText;
  } else {
    return fail_rec("ParseError", "field 'kind' must be \"image\" or \"text\"");
  }
  if (obj.contains("lang") && !obj["lang"].is_null()) {
    if (!obj["lang"].is_string() ||
        !IsLanguageTag(obj["lang"].get<std::string>())) {
      return fail_rec("ParseError",
                      "field 'lang' must be null or match [a-z]{2,3}");
    }
    record.lang = obj["lang"].get<std::string>();
  }
  const auto& dim = obj.contains("dim") ? obj["dim"] : nlohmann::json();
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) {
    return fail_rec("ParseError", "field 'dim' must be a positive integer");
  }
  if (!obj.contains("vec") || !obj["vec"].is_array()) {
    return fail_rec("ParseError", "field 'vec' must be an array");
  }
  const auto& vec = obj["vec"];
  if (vec.size() != dim.get<std::size_t>()) {
    return fail_rec("ParseError", "dim is " + std::to_string(dim.get<std::size_t>()) +
                                      " but vec has " +
                                      std::to_string(vec.size()) + " components");
  }
  std::vector<double> values;
  values.reserve(vec.size());
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (vec[i].is_null()) {
      return fail_rec("InvalidVectorError",
                      "component " + std::to_string(i) + " is not finite");
    }
    if (!vec[i].is_number()) {
      return fail_rec("ParseError",
                      "component " + std::to_string(i) + " is not a number");
    }
    values.push_back(vec[i].get<double>());
  }
  try {
    record.vec = Vector(std::move(values));
  } catch (const InvalidVectorError& e) {
    return fail_rec("InvalidVectorError", e.what());
  }
  return record;
}

}  // namespace internal

// Streams records from `in`, one line at a time.
inline EmbeddingStore ParseEmbeddings(std::istream& in,
                                      const std::string& source = "<input>") {
  EmbeddingStore store;
  std::vector<internal::Diagnostic> diags;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto record = internal::ParseEmbeddingLine(line, line_no, diags);
    if (!record) continue;
    if (!seen.insert(record->id).second) {
      diags.push_back({"DuplicateIdError", "line " + std::to_string(line_no) +
                                               ": duplicate id '" +
                                               record->id + "'"});
      continue;
    }
    store.Add(std::move(*record));
  }
  if (!diags.empty()) internal::ThrowDiagnostics(source, diags);
  if (store.empty()) store.warnings.push_back(source + ": no records");
  return store;
}

inline EmbeddingStore LoadEmbeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return ParseEmbeddings(in, path);
}

inline std::string SerializeEmbeddingRecord(const EmbeddingRecord& record) {
  nlohmann::ordered_json obj;
  obj["id"] = record.id;
  obj["kind"] = ToString(record.kind);
  obj["lang"] = record.lang ? nlohmann::ordered_json(*record.lang)
                            : nlohmann::ordered_json(nullptr);
  obj["dim"] = record.dim();
  auto& vec = obj["vec"] = nlohmann::ordered_json::array();
  for (double x : record.vec.values()) vec.push_back(x);
  return obj.dump();
}

// Writes one line per record. Doubles use the shortest representation that
// parses back to the same value, so load/serialize is lossless.
inline void SerializeEmbeddings(const EmbeddingStore& store, std::ostream& out) {
  for (const EmbeddingRecord& record : store.records()) {
    out << SerializeEmbeddingRecord(record) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Manifest.

struct PairEntry {
  std::string image_id;
  std::map<std::string, std::string> text_by_lang;
};

struct PairManifest {
  std::vector<PairEntry> pairs;
  std::optional<std::string> portion_tag;
  Taxonomy taxonomy;
  std::map<std::string, std::set<GroupLabel>> groups;
  std::map<std::string, std::string> truth;
  // Union of caption languages, sorted.
  std::vector<std::string> languages;
  // True when pairs do not all share the same caption languages.
  bool ragged = false;
  std::vector<std::string> warnings;
};

namespace internal {

inline void CollectGroups(const nlohmann::json& doc, PairManifest& manifest,
                          bool taxonomy_declared,
                          std::vector<Diagnostic>& diags) {
  if (!doc.contains("groups")) return;
  const auto& groups = doc["groups"];
  if (!groups.is_object()) {
    diags.push_back({"ParseError", "'groups' must be an object"});
    return;
  }
  for (const auto& [image_id, dims] : groups.items()) {
    if (!dims.is_object()) {
      diags.push_back({"ParseError", "groups of '" + image_id +
                                         "' must be an object"});
      continue;
    }
    auto& labels = manifest.groups[image_id];
    for (const auto& [dim, value] : dims.items()) {
      std::vector<std::string> values;
      if (value.is_string()) {
        values.push_back(value.get<std::string>());
      } else if (value.is_array() &&
                 std::all_of(value.begin(), value.end(),
                             [](const auto& v) { return v.is_string(); })) {
        for (const auto& v : value) values.push_back(v.get<std::string>());
      } else {
        diags.push_back({"ParseError", "group '" + dim + "' of '" + image_id +
                                           "' must be a string or string list"});
        continue;
      }
      for (const std::string& v : values) {
        auto& declared = manifest.taxonomy[dim];
        const bool known =
            std::find(declared.begin(), declared.end(), v) != declared.end();
        if (!known) {
          if (taxonomy_declared) {
            diags.push_back({"TaxonomyError", "image '" + image_id +
                                                  "' has undeclared group " +
                                                  dim + "=" + v});
            continue;
          }
          declared.push_back(v);
        }
        labels.insert({dim, v});
      }
    }
  }
}

}  // namespace internal

inline PairManifest ParseManifest(const nlohmann::json& doc,
                                  const EmbeddingStore& store,
                                  const std::string& source = "<manifest>") {
  PairManifest manifest;
  std::vector<internal::Diagnostic> diags;
  if (!doc.is_object()) throw ParseError(source + ": manifest must be an object");

  if (doc.contains("portion_tag") && !doc["portion_tag"].is_null()) {
    if (doc["portion_tag"].is_string()) {
      manifest.portion_tag = doc["portion_tag"].get<std::string>();
    } else {
      diags.push_back({"ParseError", "'portion_tag' must be a string"});
    }
  }

  const bool taxonomy_declared = doc.contains("taxonomy");
  if (taxonomy_declared) {
    const auto& taxonomy = doc["taxonomy"];
    if (!taxonomy.is_object()) {
      diags.push_back({"ParseError", "'taxonomy' must be an object"});
    } else {
      for (const auto& [dim, values] : taxonomy.items()) {
        if (dim.empty() || !values.is_array() || values.empty()) {
          diags.push_back({"TaxonomyError", "taxonomy dimension '" + dim +
                                                "' needs a non-empty list"});
          continue;
        }
        auto& declared = manifest.taxonomy[dim];
        for (const auto& v : values) {
          if (!v.is_string() || v.get<std::string>().empty()) {
            diags.push_back({"TaxonomyError", "taxonomy dimension '" + dim +
                                                  "' has a non-string value"});
            continue;
          }
          declared.push_back(v.get<std::string>());
        }
      }
    }
  }
  internal::CollectGroups(doc, manifest, taxonomy_declared, diags);
  for (const auto& [image_id, unused] : manifest.groups) {
    const EmbeddingRecord* rec = store.Find(image_id);
    if (rec == nullptr || rec->kind != EmbeddingKind::kImage) {
      diags.push_back({"DanglingReferenceError",
                       "groups reference unknown image '" + image_id + "'"});
    }
  }

  if (!doc.contains("pairs") || !doc["pairs"].is_array()) {
    diags.push_back({"ParseError", "'pairs' must be an array"});
  } else {
    std::set<std::string> seen_images;
    std::set<std::string> all_langs;
    std::optional<std::set<std::string>> first_langs;
    std::size_t index = 0;
    for (const auto& entry : doc["pairs"]) {
      const std::string where = "pairs[" + std::to_string(index++) + "]";
      if (!entry.is_object() || !entry.contains("image_id") ||
          !entry["image_id"].is_string()) {
        diags.push_back({"ParseError", where + ": needs string 'image_id'"});
        continue;
      }
      PairEntry pair;
      pair.image_id = entry["image_id"].get<std::string>();
      if (!seen_images.insert(pair.image_id).second) {
        diags.push_back({"DuplicateIdError", where + ": image '" +
                                                 pair.image_id +
                                                 "' listed twice"});
      }
      const EmbeddingRecord* image = store.Find(pair.image_id);
      if (image == nullptr) {
        diags.push_back({"DanglingReferenceError",
                         where + ": unknown image id '" + pair.image_id + "'"});
      } else if (image->kind != EmbeddingKind::kImage) {
        diags.push_back({"DanglingReferenceError",
                         where + ": '" + pair.image_id + "' is not an image"});
      }
      if (entry.contains("texts")) {
        if (!entry["texts"].is_object()) {
          diags.push_back({"ParseError", where + ": 'texts' must be an object"});
          continue;
        }
        for (const auto& [lang, text_id] : entry["texts"].items()) {
          if (!IsLanguageTag(lang) || !text_id.is_string()) {
            diags.push_back({"ParseError", where + ": bad text entry '" + lang +
                                               "'"});
            continue;
          }
          const std::string id = text_id.get<std::string>();
          const EmbeddingRecord* text = store.Find(id);
          if (text == nullptr) {
            diags.push_back({"DanglingReferenceError",
                             where + ": unknown text id '" + id + "'"});
          } else if (text->kind != EmbeddingKind::kText) {
            diags.push_back({"DanglingReferenceError",
                             where + ": '" + id + "' is not a text record"});
          } else if (text->lang && *text->lang != lang) {
            diags.push_back({"ManifestError", where + ": text '" + id +
                                                  "' has lang '" + *text->lang +
                                                  "', listed under '" + lang +
                                                  "'"});
          }
          pair.text_by_lang[lang] = id;
          all_langs.insert(lang);
        }
      }
      std::set<std::string> langs;
      for (const auto& [lang, unused] : pair.text_by_lang) langs.insert(lang);
      if (!first_langs) {
        first_langs = langs;
      } else if (*first_langs != langs) {
        manifest.ragged = true;
      }
      manifest.pairs.push_back(std::move(pair));
    }
    manifest.languages.assign(all_langs.begin(), all_langs.end());
    if (manifest.ragged) {
      manifest.warnings.push_back(
          "pairs do not all share the same caption languages");
    }
  }

  if (doc.contains("truth")) {
    if (!doc["truth"].is_object()) {
      diags.push_back({"ParseError", "'truth' must be an object"});
    } else {
      for (const auto& [image_id, label] : doc["truth"].items()) {
        if (!label.is_string()) {
          diags.push_back({"ParseError",
                           "truth of '" + image_id + "' must be a string"});
          continue;
        }
        const EmbeddingRecord* rec = store.Find(image_id);
        if (rec == nullptr || rec->kind != EmbeddingKind::kImage) {
          diags.push_back({"DanglingReferenceError",
                           "truth references unknown image '" + image_id + "'"});
          continue;
        }
        manifest.truth[image_id] = label.get<std::string>();
      }
    }
  }

  if (!diags.empty()) internal::ThrowDiagnostics(source, diags);
  return manifest;
}

inline PairManifest LoadManifest(const std::string& path,
                                 const EmbeddingStore& store) {
  return ParseManifest(
      internal::ParseJsonDocument(internal::ReadFile(path), path), store, path);
}

// One triple per pair, in manifest order. Every pair needs two or more
// caption languages and all vectors must share one dimension.
inline std::vector<GroundedTriple> AssembleTriples(const PairManifest& manifest,
                                                   const EmbeddingStore& store) {
  std::vector<GroundedTriple> triples;
  triples.reserve(manifest.pairs.size());
  std::optional<std::size_t> dim;
  auto lookup = [&](const std::string& id) -> const Vector& {
    const EmbeddingRecord* rec = store.Find(id);
    if (rec == nullptr) {
      throw DanglingReferenceError("unknown embedding id '" + id + "'");
    }
    if (!dim) dim = rec->dim();
    if (rec->dim() != *dim) {
      throw DimensionError("embedding '" + id + "' has dim " +
                           std::to_string(rec->dim()) + ", expected " +
                           std::to_string(*dim));
    }
    return rec->vec;
  };
  for (const PairEntry& pair : manifest.pairs) {
    if (pair.text_by_lang.size() < 2) {
      throw MissingLanguageError("image '" + pair.image_id + "' has " +
                                 std::to_string(pair.text_by_lang.size()) +
                                 " caption language(s), need at least 2");
    }
    GroundedTriple triple{pair.image_id, lookup(pair.image_id), {},
                          manifest.portion_tag.value_or("")};
    for (const auto& [lang, text_id] : pair.text_by_lang) {
      triple.text_by_lang.emplace(lang, lookup(text_id));
    }
    triples.push_back(std::move(triple));
  }
  return triples;
}

// Images in manifest order with their group labels.
inline std::vector<ImageItem> AssembleImages(const PairManifest& manifest,
                                             const EmbeddingStore& store) {
  std::vector<ImageItem> images;
  images.reserve(manifest.pairs.size());
  for (const PairEntry& pair : manifest.pairs) {
    const EmbeddingRecord* rec = store.Find(pair.image_id);
    if (rec == nullptr) {
      throw DanglingReferenceError("unknown image id '" + pair.image_id + "'");
    }
    auto groups = manifest.groups.find(pair.image_id);
    images.push_back({pair.image_id, rec->vec,
                      groups == manifest.groups.end() ? std::set<GroupLabel>{}
                                                      : groups->second});
  }
  return images;
}

// Ground truth for classifying `dimension`: the explicit truth map when
// present, otherwise each image's label in that dimension. Images with no
// single label are left out (and rejected later by RunZeroShot).
inline std::map<std::string, std::string> TruthFor(const PairManifest& manifest,
                                                   const std::string& dimension) {
  if (!manifest.truth.empty()) return manifest.truth;
  std::map<std::string, std::string> truth;
  for (const auto& [image_id, labels] : manifest.groups) {
    std::vector<std::string> values;
    for (const GroupLabel& g : labels) {
      if (g.dimension == dimension) values.push_back(g.value);
    }
    if (values.size() == 1) truth[image_id] = values.front();
  }
  return truth;
}

// ---------------------------------------------------------------------------
// Prompt specs and prompt embeddings.

inline std::string PromptEmbeddingId(const std::string& dimension,
                                     const std::string& lang,
                                     const std::string& label) {
  return "prompt/" + dimension + "/" + lang + "/" + label;
}

inline PromptSpec ParsePromptSpec(const nlohmann::json& doc,
                                  const std::string& source = "<prompts>") {
  PromptSpec spec;
  try {
    spec.dimension = doc.at("dimension").get<std::string>();
    spec.labels = doc.at("labels").get<std::vector<std::string>>();
    spec.template_by_lang =
        doc.at("templates").get<std::map<std::string, std::string>>();
    spec.surface_by_lang =
        doc.at("surfaces")
            .get<std::map<std::string, std::map<std::string, std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
  for (const auto& [lang, unused] : spec.template_by_lang) {
    if (!IsLanguageTag(lang)) {
      throw PromptSpecError(source + ": bad language tag '" + lang + "'");
    }
  }
  try {
    ValidatePromptSpec(spec);
  } catch (Error& e) {
    e.Prepend(source);
    throw;
  }
  return spec;
}

inline PromptSpec LoadPromptSpec(const std::string& path) {
  return ParsePromptSpec(
      internal::ParseJsonDocument(internal::ReadFile(path), path), path);
}

inline nlohmann::ordered_json PromptSpecToJson(const PromptSpec& spec) {
  nlohmann::ordered_json doc;
  doc["dimension"] = spec.dimension;
  doc["labels"] = spec.labels;
  doc["templates"] = spec.template_by_lang;
  doc["surfaces"] = spec.surface_by_lang;
  return doc;
}

// Looks up "prompt/<dimension>/<lang>/<label>" text records in `store`.
inline PromptEmbeddingSet PromptEmbeddingsFromStore(
    const PromptSpec& spec, std::span<const std::string> languages,
    const EmbeddingStore& store) {
  return PromptEmbeddingSet::Build(
      spec, languages,
      [&](const std::string& lang,
          const std::string& label) -> std::optional<Vector> {
        const std::string id = PromptEmbeddingId(spec.dimension, lang, label);
        const EmbeddingRecord* rec = store.Find(id);
        if (rec == nullptr || rec->kind != EmbeddingKind::kText) {
          return std::nullopt;
        }
        if (rec->lang && *rec->lang != lang) {
          throw PromptSpecError("prompt embedding '" + id + "' has lang '" +
                                *rec->lang + "'");
        }
        return rec->vec;
      });
}

}  // namespace fairlens

#endif  // FAIRLENS_INGEST_HPP_
