#!/usr/bin/env python3
# Copyright 2026 The SceneForge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Copyright 2026 The SceneForge Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the adversarial knowledge-base fixture.

Ten true entries copied from data/kb.json plus two wrong-season decoys:
one whose text is the first query's descriptor (inserted ahead of the
true entry, so the true entry ranks second), and one whose text is the
second query's raw path string (so a path-text query lands on it).
"""

import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
KB = json.loads((HERE.parents[1] / "data" / "kb.json").read_text())

PICK = [
    ("Apple", "Gala", "Reproductive", "Spring", "Healthy"),
    ("Cherry", "Bing", "Maturation", "Summer", "Ill"),
    ("Banana", "Cavendish", "Vegetative", "Fall", "Healthy"),
    ("Carrot", "Nantes", "Maturation", "Winter", "Healthy"),
    ("Lettuce", "OakLeaf", "Reproductive", "Summer", "Ill"),
    ("Tomato", "SanMarzano", "Maturation", "Fall", "Healthy"),
    ("Tomato", "Cherry", "Vegetative", "Spring", "Ill"),
    ("Apple", "GrannySmith", "Maturation", "Winter", "Ill"),
    ("Lettuce", "LolloRosso", "Vegetative", "Winter", "Healthy"),
    ("Banana", "RedDacca", "Reproductive", "Summer", "Healthy"),
]

LIFE = {"Vegetative": "young", "Reproductive": "flowering", "Maturation": "mature"}


def split(v):
    return "".join((" " + c if i and c.isupper() else c) for i, c in enumerate(v))


def descriptor(m):
    health = "healthy" if m["health"] == "Healthy" else "diseased"
    return f"{health} {LIFE[m['lifecycle']]} {split(m['variety'])} {m['crop'].lower()} in {m['season'].lower()}"


def path(m):
    v, l, s, h = m["variety"], m["lifecycle"], m["season"], m["health"]
    return f"/Game/{m['category']}/{m['crop']}/{v}/{l}/{s}/{h}/{v}_{l}_{s}_{h}.fbx"


def find(crop, variety, lifecycle, season, health):
    for e in KB:
        m = e["meta"]
        if (m["crop"], m["variety"], m["lifecycle"], m["season"], m["health"]) == (crop, variety, lifecycle, season, health):
            return json.loads(json.dumps(e))
    raise KeyError((crop, variety))


def decoy(true_entry, season, text, suffix):
    d = find(true_entry["meta"]["crop"], true_entry["meta"]["variety"], true_entry["meta"]["lifecycle"],
             season, true_entry["meta"]["health"])
    d["id"] = d["id"] + "-" + suffix
    d["text"] = text
    return d


def main():
    entries = [find(*p) for p in PICK]
    first, second = entries[0], entries[1]
    entries.insert(0, decoy(first, "Fall", descriptor(first["meta"]), "decoy"))
    entries.append(decoy(second, "Winter", path(second["meta"]), "decoy"))
    (HERE / "adversarial_kb.json").write_text(json.dumps(entries, indent=1) + "\n")
    (HERE / "adversarial_queries.json").write_text(json.dumps([path(find(*p)["meta"]) for p in PICK], indent=1) + "\n")


if __name__ == "__main__":
    main()
