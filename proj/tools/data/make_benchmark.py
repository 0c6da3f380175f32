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
"""Regenerates data/benchmark.jsonl (100 authored prompts).

Expected paths follow the documented defaults: first configured variety,
Maturation, Summer, Healthy; a category alone means its first crop; one
explicitly named season applies to every field of a prompt.
"""

import json
import pathlib
import random

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"
TAX = json.loads((DATA / "taxonomy.json").read_text())
CATEGORY_OF = {crop: cat for cat, crops in TAX["categories"].items() for crop in crops}

PLACE = {"Apple": "orchard", "Banana": "plantation", "Cherry": "orchard",
         "Carrot": "field", "Lettuce": "field", "Tomato": "field"}
LIFECYCLE_WORDS = {"Vegetative": ["young", "seedling"], "Reproductive": ["flowering", "blooming"],
                   "Maturation": ["mature", "ripe", "harvest-ready"]}
SEASON_WORDS = {"Spring": ["spring"], "Summer": ["summer"], "Fall": ["fall", "autumn"], "Winter": ["winter"]}
HEALTH_WORDS = {"Healthy": ["healthy", "thriving"], "Ill": ["diseased", "sick", "unhealthy"]}


def words(pascal):
    out = ""
    for i, ch in enumerate(pascal):
        if i and ch.isupper():
            out += " "
        out += ch.lower()
    return out


def path(crop, variety=None, lifecycle=None, season=None, health=None):
    variety = variety or TAX["varieties"][crop][0]
    lifecycle = lifecycle or "Maturation"
    season = season or "Summer"
    health = health or "Healthy"
    return (f"/Game/{CATEGORY_OF[crop]}/{crop}/{variety}/{lifecycle}/{season}/{health}/"
            f"{variety}_{lifecycle}_{season}_{health}.fbx")


def variety_phrase(crop, variety):
    if crop == "Tomato" and variety == "Cherry":
        return "cherry tomato"
    return f"{words(variety)} {crop.lower()}"


def detailed(rng):
    cases = [("Generate a healthy Pink Lady apple orchard in summer.",
              [path("Apple", "PinkLady", "Maturation", "Summer", "Healthy")])]
    templates = [
        "Generate a {h} {l} {v} {p} in {s}.",
        "Create a {l} {v} {p} that is {h}, in {s}.",
        "I want a {h} {v} {p} in {s} at the {l} stage.",
        "Show me a {s} {p} of {l} {h} {v} plants.",
        "Build a {h} {v} {p} in {s}; the plants should be {l}.",
    ]
    combos = []
    for crop, varieties in TAX["varieties"].items():
        for variety in varieties:
            combos.append((crop, variety))
    rng.shuffle(combos)
    extra = combos[:]
    rng.shuffle(extra)
    for crop, variety in (combos + extra)[:39]:
        lifecycle = rng.choice(TAX["lifecycles"])
        season = rng.choice(TAX["seasons"])
        health = rng.choice(TAX["healths"])
        t = rng.choice(templates)
        prompt = t.format(h=rng.choice(HEALTH_WORDS[health]), l=rng.choice(LIFECYCLE_WORDS[lifecycle]),
                          v=variety_phrase(crop, variety), p=PLACE[crop],
                          s=rng.choice(SEASON_WORDS[season]))
        cases.append((prompt, [path(crop, variety, lifecycle, season, health)]))
    return [{"prompt": p, "category": "single_detailed", "expected_paths": e} for p, e in cases]


def generic():
    cases = [
        ("Create a carrot field.", [path("Carrot")]),
        ("Generate an apple orchard.", [path("Apple")]),
        ("Make a banana plantation.", [path("Banana")]),
        ("Show a cherry orchard.", [path("Cherry")]),
        ("I need a lettuce field.", [path("Lettuce")]),
        ("Generate a tomato field.", [path("Tomato")]),
        ("Generate some apples.", [path("Apple")]),
        ("Create a field of carrots.", [path("Carrot")]),
        ("Render a patch of lettuce in winter.", [path("Lettuce", season="Winter")]),
        ("A young apple orchard.", [path("Apple", lifecycle="Vegetative")]),
        ("Generate a diseased tomato field.", [path("Tomato", health="Ill")]),
        ("Create a flowering cherry orchard.", [path("Cherry", lifecycle="Reproductive")]),
        ("Show me bananas in autumn.", [path("Banana", season="Fall")]),
        ("Make a Gala apple orchard.", [path("Apple", "Gala")]),
        ("Generate Romaine lettuce.", [path("Lettuce", "Romaine")]),
        ("A field of San Marzano tomatoes.", [path("Tomato", "SanMarzano")]),
        ("Create a sick carrot field in spring.", [path("Carrot", season="Spring", health="Ill")]),
        ("Generate an orchard of ripe Bing cherries.", [path("Cherry", "Bing", "Maturation")]),
        ("Some seedling lettuce, please.", [path("Lettuce", lifecycle="Vegetative")]),
        ("Blooming banana plants in spring.", [path("Banana", lifecycle="Reproductive", season="Spring")]),
        ("Create cherry tomatoes.", [path("Tomato", "Cherry")]),
        ("Put down a Nantes carrot bed.", [path("Carrot", "Nantes")]),
        ("Generate an unhealthy Fuji orchard.", [path("Apple", "Fuji", health="Ill")]),
        ("Create a Cavendish plantation in winter.", [path("Banana", "Cavendish", season="Winter")]),
        ("Make a harvest-ready tomato field.", [path("Tomato", lifecycle="Maturation")]),
        ("Generate young carrots in fall.", [path("Carrot", lifecycle="Vegetative", season="Fall")]),
        ("Show a thriving Iceberg lettuce field.", [path("Lettuce", "Iceberg", health="Healthy")]),
        ("Create a Rainier cherry orchard in summer.", [path("Cherry", "Rainier", season="Summer")]),
        ("Generate Granny Smith apples in spring.", [path("Apple", "GrannySmith", season="Spring")]),
        ("Build a Heirloom tomato plot.", [path("Tomato", "Heirloom")]),
        ("Generate a fruit orchard.", [path("Apple")]),
        ("Create a vegetable field.", [path("Carrot")]),
        ("Make a Lady Finger banana grove in autumn.", [path("Banana", "LadyFinger", season="Fall")]),
        ("Generate a Chantenay field with sick plants.", [path("Carrot", "Chantenay", health="Ill")]),
        ("Give me a Honeycrisp orchard that is blooming.", [path("Apple", "Honeycrisp", "Reproductive")]),
        ("A winter field of Butterhead lettuce.", [path("Lettuce", "Butterhead", season="Winter")]),
        ("Generate Montmorency cherries, flowering.", [path("Cherry", "Montmorency", "Reproductive")]),
        ("Create a Kumato tomato field in spring.", [path("Tomato", "Kumato", season="Spring")]),
        ("Show me apple trees in blossom season.", [path("Apple", lifecycle="Reproductive")]),
        ("Generate a lettuce field ready for picking.", [path("Lettuce", lifecycle="Maturation")]),
    ]
    return [{"prompt": p, "category": "single_generic", "expected_paths": e} for p, e in cases]


def multi():
    cases = [
        ("Generate some fruit and vegetable fields.", [path("Apple"), path("Carrot")]),
        ("Create an apple orchard and a carrot field.", [path("Apple"), path("Carrot")]),
        ("Generate a banana plantation and a tomato field in winter.",
         [path("Banana", season="Winter"), path("Tomato", season="Winter")]),
        ("Make a cherry orchard, a lettuce field and a carrot field.",
         [path("Cherry"), path("Lettuce"), path("Carrot")]),
        ("A young apple orchard alongside a flowering tomato field.",
         [path("Apple", lifecycle="Vegetative"), path("Tomato", lifecycle="Reproductive")]),
        ("Generate Gala apples and Nantes carrots in autumn.",
         [path("Apple", "Gala", season="Fall"), path("Carrot", "Nantes", season="Fall")]),
        ("Create a diseased banana plantation next to a healthy lettuce field.",
         [path("Banana", health="Ill"), path("Lettuce", health="Healthy")]),
        ("Two apple orchards and a cherry orchard.", [path("Apple"), path("Cherry")]),
        ("Generate a tomato field in spring and an apple orchard in fall.",
         [path("Tomato", season="Spring"), path("Apple", season="Fall")]),
        ("Lettuce, carrots and tomatoes in summer.", [path("Lettuce"), path("Carrot"), path("Tomato")]),
        ("Create Romaine lettuce plus Roma tomatoes.", [path("Lettuce", "Romaine"), path("Tomato", "Roma")]),
        ("Generate Bing cherries as well as Fuji apples in winter.",
         [path("Cherry", "Bing", season="Winter"), path("Apple", "Fuji", season="Winter")]),
        ("Make a banana plantation and a carrot field, both sick.",
         [path("Banana", health="Ill"), path("Carrot", health="Ill")]),
        ("Generate a mature apple orchard and seedling lettuce.",
         [path("Apple", lifecycle="Maturation"), path("Lettuce", lifecycle="Vegetative")]),
        ("A cherry tomato field beside a Cavendish banana plantation.",
         [path("Tomato", "Cherry"), path("Banana", "Cavendish")]),
        ("Create three carrot fields and one lettuce field in spring.",
         [path("Carrot", season="Spring"), path("Lettuce", season="Spring")]),
        ("Generate fruit trees and vegetables in autumn.",
         [path("Apple", season="Fall"), path("Carrot", season="Fall")]),
        ("Show an Imperator carrot field & a Butterhead lettuce field.",
         [path("Carrot", "Imperator"), path("Lettuce", "Butterhead")]),
        ("Generate blooming cherry orchards and ripe tomatoes.",
         [path("Cherry", lifecycle="Reproductive"), path("Tomato", lifecycle="Maturation")]),
        ("Create an apple orchard, a banana plantation and a cherry orchard in winter.",
         [path("Apple", season="Winter"), path("Banana", season="Winter"), path("Cherry", season="Winter")]),
    ]
    return [{"prompt": p, "category": "multi_generic", "expected_paths": e} for p, e in cases]


def main():
    rng = random.Random(20260)
    cases = detailed(rng) + generic() + multi()
    assert len(cases) == 100, len(cases)
    with (DATA / "benchmark.jsonl").open("w") as out:
        for c in cases:
            out.write(json.dumps(c) + "\n")
    print(f"wrote {len(cases)} cases")


if __name__ == "__main__":
    main()
