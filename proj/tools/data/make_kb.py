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
"""Regenerates data/kb.json from data/taxonomy.json.

One entry per taxonomy tuple. Values are agronomic ballparks per crop,
adjusted by variety, lifecycle, season and health.
"""

import json
import pathlib

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"

# mature height (m), row spacing (m), plant spacing (m), irrigation
CROPS = {
    "Apple": (4.0, 4.5, 2.0, "drip"),
    "Banana": (4.5, 3.0, 2.5, "sprinkler"),
    "Cherry": (5.0, 5.0, 3.0, "drip"),
    "Carrot": (0.3, 0.4, 0.05, "sprinkler"),
    "Lettuce": (0.25, 0.45, 0.3, "sprinkler"),
    "Tomato": (1.2, 1.5, 0.6, "drip"),
}

VARIETY = {
    "PinkLady": (1.05, "medium"), "Gala": (0.95, "high"), "Fuji": (1.1, "medium"),
    "GrannySmith": (1.0, "low"), "Honeycrisp": (0.9, "high"),
    "Cavendish": (1.0, "high"), "RedDacca": (1.15, "medium"), "LadyFinger": (0.95, "low"),
    "Bing": (1.0, "high"), "Rainier": (0.95, "medium"), "Montmorency": (0.8, "low"), "Lapins": (1.05, "medium"),
    "Nantes": (1.0, "medium"), "Imperator": (1.1, "medium"), "Chantenay": (0.85, "low"), "Danvers": (0.95, "low"),
    "Romaine": (1.2, "medium"), "Butterhead": (0.8, "high"), "Iceberg": (1.0, "medium"),
    "OakLeaf": (0.9, "low"), "LolloRosso": (0.85, "low"),
    "Roma": (0.9, "medium"), "Cherry": (1.1, "low"), "Beefsteak": (1.2, "high"), "SanMarzano": (1.05, "high"),
    "Heirloom": (1.15, "high"), "Kumato": (1.0, "medium"), "GreenZebra": (0.95, "medium"),
}

LIFECYCLE = {"Vegetative": 0.45, "Reproductive": 0.85, "Maturation": 1.0}
SEASON = {"Spring": 0.97, "Summer": 1.0, "Fall": 1.0, "Winter": 0.93}
HEALTH = {"Healthy": 1.0, "Ill": 0.85}
BUMP = {"low": "medium", "medium": "high", "high": "high"}
TREES = {"Apple", "Cherry", "Banana"}


def effects(crop, lifecycle, season, health):
    out = []
    if lifecycle == "Reproductive":
        out.append("blossoms")
    if lifecycle == "Maturation":
        out.append("visible_produce")
    if season == "Fall":
        out.append("autumn_foliage")
    if season == "Winter":
        out.append("bare_branches" if crop in TREES else "frost")
    if health == "Ill":
        out += ["leaf_spots", "wilting"]
    return out


def main():
    tax = json.loads((DATA / "taxonomy.json").read_text())
    entries = []
    for category, crops in tax["categories"].items():
        for crop in crops:
            height, row, plant, irrigation = CROPS[crop]
            for variety in tax["varieties"][crop]:
                factor, risk = VARIETY[variety]
                for lifecycle in tax["lifecycles"]:
                    for season in tax["seasons"]:
                        for health in tax["healths"]:
                            h = height * factor * LIFECYCLE[lifecycle] * SEASON[season] * HEALTH[health]
                            density = 10000.0 / (row * plant)
                            entries.append({
                                "id": "-".join(["kb", crop, variety, lifecycle, season, health]).lower(),
                                "meta": {"category": category, "crop": crop, "variety": variety,
                                         "lifecycle": lifecycle, "season": season, "health": health},
                                "plant_height_m": round(h, 3),
                                "row_spacing_m": row,
                                "plant_spacing_m": plant,
                                "density_per_ha": round(density),
                                "disease_susceptibility": BUMP[risk] if health == "Ill" else risk,
                                "irrigation": irrigation,
                                "rendering_effects": effects(crop, lifecycle, season, health),
                            })
    (DATA / "kb.json").write_text(json.dumps(entries, indent=1) + "\n")
    print(f"wrote {len(entries)} entries")


if __name__ == "__main__":
    main()
