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

#include <algorithm>
#include <numeric>

#include "sceneforge/errors.hpp"
#include "sceneforge/eval.hpp"
#include "sceneforge/knowledge.hpp"
#include "support/helpers.hpp"

using namespace sceneforge;
using sceneforge::testing::default_kb;
using sceneforge::testing::default_taxonomy;

namespace {

// Brute-force rank of the first strictly matching entry: cosine against
// every entry text, ties by position.
std::size_t oracle_rank(const AssetPath& path, const std::vector<KnowledgeEntry>& entries) {
    const auto& tax = default_taxonomy();
    const auto meta = parse_path(path, tax);
    const auto q = embed_local(descriptor_for(meta));
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        scored.emplace_back(cosine(q, embed_local(KnowledgeBase::embedding_text(entries[i]))), i);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t r = 0; r < scored.size(); ++r) {
        if (strict_match(entries[scored[r].second], meta)) return r + 1;
    }
    return 0;
}

std::size_t mismatches(const SceneRecipe& recipe) {
    return static_cast<std::size_t>(std::count_if(recipe.lines.begin(), recipe.lines.end(),
                                                  [](const RecipeLine& l) { return !l.matched; }));
}

}  // namespace

TEST_CASE("descriptor text") {
    CHECK(descriptor_for({Category::Fruits, "Apple", "PinkLady", Lifecycle::Vegetative, Season::Fall,
                          Health::Healthy}) == "healthy young Pink Lady apple in fall");
}

TEST_CASE("fuzzy variety match") {
    CHECK(varieties_match("PinkLady", "pink lady"));
    CHECK(varieties_match("PinkLady", "PinkLdy"));
    CHECK(varieties_match("Gala", "Galas"));
    CHECK_FALSE(varieties_match("Gala", "Fuji"));
    CHECK_FALSE(varieties_match("Roma", "Cherry"));
}

TEST_CASE("bundled knowledge base: every path resolves to its own entry") {
    const auto& tax = default_taxonomy();
    const auto& kb = default_kb();
    REQUIRE(kb.size() == 672);
    const auto paths = enumerate_paths(tax);
    FallbackLog log;
    const auto recipe = retrieve_entries(paths, kb, tax, {}, &log);
    REQUIRE(recipe.lines.size() == paths.size());
    CHECK(recipe.fallbacks.empty());
    CHECK(log.events().empty());
    CHECK(mismatches(recipe) == 0);
    for (const auto& line : recipe.lines) {
        CHECK(line.resolution == Resolution::Semantic);
        CHECK(strict_match(line.entry, parse_path(line.path, tax)));
    }
}

TEST_CASE("bundled entries satisfy the density relation") {
    for (const auto& e : default_kb().entries()) {
        const double expected = 10000.0 / (e.row_spacing_m * e.plant_spacing_m);
        CHECK(std::abs(e.density_per_ha - expected) <= 0.1 * expected);
        CHECK(e.plant_height_m > 0.0);
    }
}

TEST_CASE("entry validation") {
    auto e = default_kb().entries().front();
    CHECK_NOTHROW(e.validate());
    CHECK(KnowledgeEntry::from_json(e.to_json()) == e);
    auto bad = e;
    bad.row_spacing_m = 0.0;
    CHECK_THROWS_AS(bad.validate(), FormatError);
    bad = e;
    bad.density_per_ha *= 2.0;
    CHECK_THROWS_AS(bad.validate(), FormatError);

    auto dup = std::vector<KnowledgeEntry>{e, e};
    CHECK_THROWS_AS(KnowledgeBase(default_taxonomy(), dup, std::make_shared<LocalEmbedder>()), FormatError);
    CHECK_THROWS_AS(KnowledgeBase(default_taxonomy(), {}, std::make_shared<LocalEmbedder>()),
                    EmptyKnowledgeBaseError);
    CHECK_THROWS_AS(KnowledgeBase::load_entries("/nonexistent/kb.json"), FormatError);
}

TEST_CASE("adversarial fixture: hybrid filter versus nearest-neighbour") {
    const auto& tax = default_taxonomy();
    const auto fx = sceneforge::testing::adversarial_fixture();
    const KnowledgeBase kb(tax, fx.entries, std::make_shared<LocalEmbedder>());

    const auto hybrid = retrieve_entries(fx.queries, kb, tax, {.k = 3, .mode = KbMode::Hybrid});
    CHECK(mismatches(hybrid) == 0);
    CHECK(hybrid.fallbacks.empty());

    const auto rag = retrieve_entries(fx.queries, kb, tax, {.k = 3, .mode = KbMode::Rag});
    CHECK(mismatches(rag) >= 1);

    std::vector<AssetMetadata> metas;
    for (const auto& q : fx.queries) metas.push_back(parse_path(q, tax));
    const auto topk = topk_recall(metas, kb, tax, {1, 2, 3});

    std::map<std::size_t, double> want;
    for (std::size_t k : {1, 2, 3}) {
        std::size_t hits = 0;
        for (const auto& q : fx.queries) {
            const auto r = oracle_rank(q, fx.entries);
            hits += (r != 0 && r <= k) ? 1 : 0;
        }
        want[k] = static_cast<double>(hits) / static_cast<double>(fx.queries.size());
    }
    CHECK(topk.at(1) == doctest::Approx(want[1]));
    CHECK(topk.at(2) == doctest::Approx(want[2]));
    CHECK(topk.at(3) == doctest::Approx(want[3]));
    CHECK(want[1] == doctest::Approx(0.9));
    CHECK(want[2] == doctest::Approx(1.0));
    CHECK(want[3] == doctest::Approx(1.0));
}

TEST_CASE("fallbacks are logged and resolved by exact lookup or crop default") {
    const auto& tax = default_taxonomy();
    const auto fx = sceneforge::testing::adversarial_fixture();
    const KnowledgeBase kb(tax, fx.entries, std::make_shared<LocalEmbedder>());
    const auto q1 = fx.queries.front();

    FallbackLog log;
    const auto k1 = retrieve_entries({q1}, kb, tax, {.k = 1}, &log);
    REQUIRE(k1.lines.size() == 1);
    CHECK(k1.lines[0].resolution == Resolution::ExactLookup);
    CHECK(strict_match(k1.lines[0].entry, parse_path(q1, tax)));
    CHECK(k1.fallbacks == std::vector<AssetPath>{q1});
    REQUIRE(log.events().size() == 1);
    CHECK(log.events()[0]["path"] == q1.str());
    CHECK(log.events()[0]["resolution"] == "exact_lookup");

    // A Bing tuple with no entry of its own falls back to a Cherry entry.
    const auto orphan = format_path({Category::Fruits, "Cherry", "Bing", Lifecycle::Vegetative, Season::Spring,
                                     Health::Ill},
                                    tax);
    FallbackLog log2;
    const auto r = retrieve_entries({orphan}, kb, tax, {}, &log2);
    CHECK(r.lines[0].resolution == Resolution::CropDefault);
    CHECK(r.lines[0].entry.meta.crop == "Cherry");
    CHECK_FALSE(r.warnings.empty());
    CHECK(log2.events().size() == 1);

    const auto no_crop = format_path({Category::Vegetables, "Lettuce", default_taxonomy().find_crop("Lettuce")->varieties[0],
                                      Lifecycle::Maturation, Season::Summer, Health::Healthy},
                                     tax);
    const bool has_lettuce = std::any_of(fx.entries.begin(), fx.entries.end(),
                                         [](const auto& e) { return e.meta.crop == "Lettuce"; });
    if (!has_lettuce) CHECK_THROWS_AS(retrieve_entries({no_crop}, kb, tax), NoMatchError);
}

TEST_CASE("topk recall on the bundled knowledge base matches the brute-force ranks") {
    const auto& tax = default_taxonomy();
    const auto& kb = default_kb();
    std::vector<AssetMetadata> metas;
    std::vector<AssetPath> paths;
    for (std::size_t i = 0; i < kb.size(); i += 17) {
        metas.push_back(kb.entries()[i].meta);
        paths.push_back(format_path(kb.entries()[i].meta, tax));
    }
    const auto topk = topk_recall(metas, kb, tax, {1, 3});
    std::size_t at1 = 0, at3 = 0;
    for (const auto& p : paths) {
        const auto r = oracle_rank(p, kb.entries());
        at1 += r == 1 ? 1 : 0;
        at3 += (r != 0 && r <= 3) ? 1 : 0;
    }
    CHECK(topk.at(1) == doctest::Approx(double(at1) / double(paths.size())));
    CHECK(topk.at(3) == doctest::Approx(double(at3) / double(paths.size())));
}

TEST_CASE("recipe JSON round trip") {
    const auto& tax = default_taxonomy();
    const auto recipe = retrieve_entries({enumerate_paths(tax)[5], enumerate_paths(tax)[400]}, default_kb(), tax);
    const auto back = SceneRecipe::from_json(recipe.to_json());
    CHECK(back.to_json() == recipe.to_json());
    CHECK(back.lines.size() == 2);
    CHECK(back.lines[1].entry == recipe.lines[1].entry);
}
