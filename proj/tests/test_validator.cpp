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

#include <map>
#include <regex>
#include <set>

#include "sceneforge/text.hpp"
#include "sceneforge/validator.hpp"
#include "support/helpers.hpp"
#include "support/mutants.hpp"

using namespace sceneforge;
using sceneforge::testing::default_config;
using sceneforge::testing::default_kb;
using sceneforge::testing::default_taxonomy;

namespace {

struct Fixture {
    SceneRecipe recipe;
    ScenePlan plan;
    ScriptText script;
};

Fixture two_fields() {
    Fixture f;
    for (const char* crop : {"Apple", "Carrot"}) {
        RecipeLine l;
        l.entry = *default_kb().crop_default(crop);
        l.path = format_path(l.entry.meta, default_taxonomy());
        l.rows = 3;
        l.cols = 4;
        f.recipe.lines.push_back(l);
    }
    f.plan = plan_scene(f.recipe, 42, default_config().planner);
    f.script = emit_script(f.plan);
    return f;
}

std::set<std::string> rules_of(const ValidationReport& r) {
    std::set<std::string> out;
    for (const auto& f : r.findings) {
        if (f.severity == Severity::Error) out.insert(f.rule_id);
    }
    return out;
}

}  // namespace

TEST_CASE("pristine script passes with no findings") {
    const auto f = two_fields();
    const auto r = validate(f.script, f.plan, default_taxonomy(), &f.recipe);
    CHECK(r.passed);
    CHECK(r.findings.empty());
    CHECK(r.error_count() == 0);
    CHECK(validate(f.script, f.plan, default_taxonomy()).findings.empty());
}

TEST_CASE("every mutant is caught by its rule") {
    const std::map<std::string, std::set<std::string>> expected{
        {"prefix_strip", {"R1"}},
        {"suffix_strip", {"R1"}},
        {"path_typo", {"R1", "R2"}},
        {"dropped_spawn", {"R5"}},
        {"doubled_spawn", {"R5"}},
        {"scale_x2", {"R4"}},
        {"spacing_plus_one", {"R6"}},
        {"missing_attachment_rule", {"R3"}},
        {"constructor_misuse", {"R3"}},
        {"foreign_path_injection", {"R2"}},
        {"swapped_field_tables", {"R2"}},
        {"empty_script", {"R2", "R3", "R5"}},
    };
    const auto f = two_fields();
    const auto corpus = sceneforge::testing::mutation_corpus(f.script, f.plan);
    CHECK(corpus.size() == expected.size());
    for (const auto& m : corpus) {
        CAPTURE(m.name);
        REQUIRE(expected.count(m.name) == 1);
        CHECK(m.source != f.script.source);
        const auto r = validate({m.source, f.script.plan_ref}, f.plan, default_taxonomy(), &f.recipe);
        CHECK_FALSE(r.passed);
        const auto got = rules_of(r);
        bool hit = false;
        for (const auto& rule : expected.at(m.name)) hit = hit || got.count(rule) == 1;
        CHECK(hit);
    }
}

TEST_CASE("stripped /Game/ prefix is an R1 error") {
    const auto f = two_fields();
    auto src = f.script.source;
    const auto asset = f.plan.fields[0].asset.str();
    const auto pos = src.find("\"" + asset + "\"");
    REQUIRE(pos != std::string::npos);
    src.replace(pos + 1, asset.size(), asset.substr(6));
    const auto r = validate({src, ""}, f.plan, default_taxonomy());
    CHECK(r.has_error("R1"));
    CHECK_FALSE(r.passed);
}

TEST_CASE("scale 2.0 is an R4 incorrect scale") {
    const auto f = two_fields();
    const auto scale = text::format_double(f.plan.fields[0].placements[0].scale);
    const auto triple = "(" + scale + ", " + scale + ", " + scale + ")";
    auto src = f.script.source;
    const auto pos = src.find(triple);
    REQUIRE(pos != std::string::npos);
    src.replace(pos, triple.size(), "(2.0, 2.0, 2.0)");
    const auto r = validate({src, ""}, f.plan, default_taxonomy(), &f.recipe);
    CHECK(r.has_error("R4"));
    bool mentions = false;
    for (const auto& finding : r.findings) mentions = mentions || finding.message.find("incorrect scale") != std::string::npos;
    CHECK(mentions);
}

TEST_CASE("recipe and plan disagreeing on scale is R4") {
    auto f = two_fields();
    auto recipe = f.recipe;
    recipe.lines[0].entry.plant_height_m *= 2.0;
    const auto r = validate(f.script, f.plan, default_taxonomy(), &recipe);
    CHECK(r.has_error("R4"));
}

TEST_CASE("structural gaps are warnings only") {
    const auto f = two_fields();
    auto src = f.script.source;
    const auto pos = src.find("def main():");
    REQUIRE(pos != std::string::npos);
    src.replace(pos, 11, "def run():");
    const auto r = validate({src, ""}, f.plan, default_taxonomy(), &f.recipe);
    CHECK(r.passed);
    REQUIRE_FALSE(r.findings.empty());
    for (const auto& finding : r.findings) CHECK(finding.severity == Severity::Warning);
}

TEST_CASE("no false positives on random recipes") {
    std::mt19937_64 rng(99);
    int false_positives = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto recipe = sceneforge::testing::random_recipe(rng, default_kb());
        const auto plan = plan_scene(recipe, rng(), default_config().planner);
        const auto r = validate(emit_script(plan), plan, default_taxonomy(), &recipe);
        if (!r.passed || !r.findings.empty()) ++false_positives;
    }
    CHECK(false_positives == 0);
}

TEST_CASE("report JSON") {
    const auto f = two_fields();
    const auto r = validate({"", ""}, f.plan, default_taxonomy());
    const auto j = r.to_json();
    CHECK(j["passed"] == false);
    CHECK(j["findings"].size() == r.findings.size());
    CHECK(j["findings"][0].contains("rule_id"));
}
