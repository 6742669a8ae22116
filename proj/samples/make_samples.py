# Copyright 2026 The FairLens Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the synthetic sample inputs in this directory.

Twelve 8-dimensional "images", each with an English and a German caption
vector, gender/race labels, and gender prompt embeddings for both languages.
Numbers are synthetic; they only exercise the file formats and the CLI.
"""

import json
import pathlib

import numpy as np

DIM = 8
HERE = pathlib.Path(__file__).resolve().parent


def fmt(v):
    return [float(repr_round(x)) for x in v]


def repr_round(x):
    return round(float(x), 6)


def main():
    rng = np.random.default_rng(7)
    female_axis = rng.normal(size=DIM)
    male_axis = rng.normal(size=DIM)
    records = []
    pairs, groups, truth = [], {}, {}
    genders = ["female", "male"]
    races = ["Black", "White"]
    for i in range(12):
        image_id = f"img_{i:04d}"
        gender = genders[i % 2]
        race = races[(i // 2) % 2]
        axis = female_axis if gender == "female" else male_axis
        image = axis + 1.6 * rng.normal(size=DIM)
        en = image + 0.5 * rng.normal(size=DIM)
        de = en + 0.3 * rng.normal(size=DIM)
        records.append({"id": image_id, "kind": "image", "lang": None,
                        "dim": DIM, "vec": fmt(image)})
        for lang, vec in (("en", en), ("de", de)):
            records.append({"id": f"txt_{lang}_{i:04d}", "kind": "text",
                            "lang": lang, "dim": DIM, "vec": fmt(vec)})
        pairs.append({"image_id": image_id,
                      "texts": {"en": f"txt_en_{i:04d}",
                                "de": f"txt_de_{i:04d}"}})
        groups[image_id] = {"gender": gender, "race": race}
        truth[image_id] = gender
    for lang, noise in (("en", 0.0), ("de", 0.8)):
        for label, axis in (("female", female_axis), ("male", male_axis)):
            vec = axis + noise * rng.normal(size=DIM)
            records.append({"id": f"prompt/gender/{lang}/{label}",
                            "kind": "text", "lang": lang, "dim": DIM,
                            "vec": fmt(vec)})

    with open(HERE / "embeddings.embjsonl", "w") as f:
        for r in records:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")
    manifest = {
        "portion_tag": "translation",
        "taxonomy": {"gender": genders, "race": races},
        "pairs": pairs,
        "groups": groups,
        "truth": truth,
    }
    (HERE / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    prompts = {
        "dimension": "gender",
        "labels": genders,
        "templates": {"en": "A photo of a {label}",
                      "de": "Ein Foto von einer Person: {label}"},
        "surfaces": {"en": {"female": "woman", "male": "man"},
                     "de": {"female": "Frau", "male": "Mann"}},
    }
    (HERE / "prompts.json").write_text(json.dumps(prompts, indent=2,
                                                  ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
