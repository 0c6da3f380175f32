/*
 * Copyright 2026 The SceneForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <random>

#include "sceneforge/errors.hpp"
#include "sceneforge/planner.hpp"
#include "support/helpers.hpp"

using namespace sceneforge;
using sceneforge::testing::default_config;
using sceneforge::testing::default_kb;
using sceneforge::testing::default_taxonomy;

namespace {

std::uint64_t ref_splitmix(std::uint64_t state) {
    std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> ref_yaws(std::uint64_t seed, std::size_t field, std::size_t n) {
    std::mt19937_64 eng(ref_splitmix(seed + 0x9e3779b97f4a7c15ULL * (field + 1)));
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::ldexp(static_cast<double>(eng() >> 11), -53) * 360.0);
    return out;
}

const KnowledgeEntry& entry_for(std::string_view crop) {
    return *default_kb().crop_default(crop);
}

RecipeLine line_for(std::string_view crop, int rows, int cols, int quantity = 1) {
    RecipeLine l;
    l.entry = entry_for(crop);
    l.path = format_path(l.entry.meta, default_taxonomy());
    l.rows = rows;
    l.cols = cols;
    l.quantity = quantity;
    return l;
}

}  // namespace

TEST_CASE("splitmix64 reference values") {
    // First outputs of SplitMix64 seeded with 0.
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("single field grid matches the reference layout") {
    const auto cfg = default_config().planner;
    SceneRecipe recipe;
    recipe.lines.push_back(line_for("Apple", 3, 4));
    const auto plan = plan_scene(recipe, 42, cfg);
    REQUIRE(plan.fields.size() == 1);
    const auto& f = plan.fields[0];
    const auto& e = entry_for("Apple");
    REQUIRE(f.placements.size() == 12);
    const auto yaws = ref_yaws(42, 0, 12);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto& p = f.placements[static_cast<std::size_t>(i * 4 + j)];
            CHECK(std::abs(p.position.x - j * e.plant_spacing_m) < 1e-9);
            CHECK(std::abs(p.position.y - i * e.row_spacing_m) < 1e-9);
            CHECK(p.position.z == 0.0);
            CHECK(p.yaw_deg == yaws[static_cast<std::size_t>(i * 4 + j)]);
            CHECK(p.scale == doctest::Approx(e.plant_height_m / cfg.reference_height("Apple")));
        }
    }
    CHECK(f.bbox.min_x == doctest::Approx(-e.plant_spacing_m / 2));
    CHECK(f.bbox.max_x == doctest::Approx(3 * e.plant_spacing_m + e.plant_spacing_m / 2));
    CHECK(f.bbox.max_y == doctest::Approx(2 * e.row_spacing_m + e.plant_spacing_m / 2));
    CHECK_NOTHROW(plan.check());
}

TEST_CASE("random recipes: spacing, gaps, disjointness, scale and yaw") {
    const auto cfg = default_config().planner;
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto recipe = sceneforge::testing::random_recipe(rng, default_kb(), 4, 7);
        const std::uint64_t seed = rng();
        const auto plan = plan_scene(recipe, seed, cfg);
        CHECK_NOTHROW(plan.check());

        std::size_t expected_fields = 0;
        for (const auto& l : recipe.lines) expected_fields += static_cast<std::size_t>(l.quantity);
        REQUIRE(plan.fields.size() == expected_fields);

        std::size_t n = 0;
        for (const auto& l : recipe.lines) {
            for (int c = 0; c < l.quantity; ++c, ++n) {
                const auto& f = plan.fields[n];
                CHECK(f.asset == l.path);
                CHECK(f.entry_id == l.entry.id);
                REQUIRE(f.placements.size() == static_cast<std::size_t>(l.rows * l.cols));
                const auto yaws = ref_yaws(seed, n, f.placements.size());
                const double want_scale = l.entry.plant_height_m / cfg.reference_height(l.entry.meta.crop);
                for (std::size_t k = 0; k < f.placements.size(); ++k) {
                    const auto& p = f.placements[k];
                    CHECK(p.yaw_deg == yaws[k]);
                    CHECK(p.yaw_deg >= 0.0);
                    CHECK(p.yaw_deg < 360.0);
                    CHECK(p.scale == want_scale);
                    CHECK(p.scale >= kMinScale);
                    CHECK(p.scale <= kMaxScale);
                    CHECK(f.bbox.contains(p.position.x, p.position.y));
                    const int i = static_cast<int>(k) / l.cols, j = static_cast<int>(k) % l.cols;
                    if (j > 0) {
                        CHECK(std::abs(p.position.x - f.placements[k - 1].position.x - l.entry.plant_spacing_m) < 1e-9);
                    }
                    if (i > 0) {
                        const auto& above = f.placements[k - static_cast<std::size_t>(l.cols)];
                        CHECK(std::abs(p.position.y - above.position.y - l.entry.row_spacing_m) < 1e-9);
                    }
                }
                if (n > 0) {
                    CHECK(std::abs(f.bbox.min_x - plan.fields[n - 1].bbox.max_x - cfg.gap_m) < 1e-9);
                }
                for (std::size_t m = 0; m < n; ++m) CHECK_FALSE(f.bbox.intersects(plan.fields[m].bbox));
            }
        }
        CHECK(plan_scene(recipe, seed, cfg) == plan);
        CHECK(ScenePlan::from_json(plan.to_json()) == plan);
    }
}

TEST_CASE("seed changes yaws only") {
    const auto cfg = default_config().planner;
    SceneRecipe recipe;
    recipe.lines.push_back(line_for("Lettuce", 2, 2, 2));
    const auto a = plan_scene(recipe, 1, cfg);
    const auto b = plan_scene(recipe, 2, cfg);
    REQUIRE(a.fields.size() == 2);
    CHECK(a.fields[0].placements[0].position == b.fields[0].placements[0].position);
    CHECK(a.fields[0].placements[0].yaw_deg != b.fields[0].placements[0].yaw_deg);
    CHECK(a.fields[0].placements[0].yaw_deg != a.fields[1].placements[0].yaw_deg);
}

TEST_CASE("invalid dimensions and scale") {
    const auto cfg = default_config().planner;
    SceneRecipe recipe;
    recipe.lines.push_back(line_for("Carrot", 0, 3));
    CHECK_THROWS_AS(plan_scene(recipe, 1, cfg), InvalidDimensionError);
    recipe.lines[0] = line_for("Carrot", 3, -1);
    CHECK_THROWS_AS(plan_scene(recipe, 1, cfg), InvalidDimensionError);
    recipe.lines[0] = line_for("Carrot", 3, 3, 0);
    CHECK_THROWS_AS(plan_scene(recipe, 1, cfg), InvalidDimensionError);

    recipe.lines[0] = line_for("Carrot", 2, 2);
    recipe.lines[0].entry.plant_height_m = 100.0;
    CHECK_THROWS_AS(plan_scene(recipe, 1, cfg), InvalidDimensionError);

    CHECK_THROWS_AS(plan_scene(SceneRecipe{}, 1, cfg), InvalidPlanError);

    PlannerConfig missing = cfg;
    missing.reference_heights_m.erase("Carrot");
    recipe.lines[0] = line_for("Carrot", 2, 2);
    CHECK_THROWS_AS(plan_scene(recipe, 1, missing), ConfigError);
}

TEST_CASE("plan check catches tampering") {
    const auto cfg = default_config().planner;
    SceneRecipe recipe;
    recipe.lines.push_back(line_for("Tomato", 2, 3, 2));
    auto plan = plan_scene(recipe, 5, cfg);
    auto bad = plan;
    bad.fields[0].placements.pop_back();
    CHECK_THROWS_AS(bad.check(), InvalidPlanError);
    bad = plan;
    bad.fields[1].origin.x = plan.fields[0].origin.x;
    bad.fields[1].bbox = plan.fields[0].bbox;
    CHECK_THROWS_AS(bad.check(), InvalidPlanError);
    bad = plan;
    bad.units = "cm";
    CHECK_THROWS_AS(bad.check(), InvalidPlanError);
}
