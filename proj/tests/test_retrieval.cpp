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
#include "sceneforge/retrieval.hpp"
#include "support/helpers.hpp"

using namespace sceneforge;
using sceneforge::testing::default_taxonomy;

namespace {

const PathRetriever& retriever() {
    static const PathRetriever r = [] {
        auto embedder = std::make_shared<LocalEmbedder>();
        auto index = PathRetriever::build_index(default_taxonomy(), *embedder);
        return PathRetriever(default_taxonomy(), embedder, std::move(index));
    }();
    return r;
}

SubQuery full(const AssetMetadata& m) {
    SubQuery q;
    q.category = m.category;
    q.crop = m.crop;
    q.variety = m.variety;
    q.lifecycle = m.lifecycle;
    q.season = m.season;
    q.health = m.health;
    return q;
}

SubQuery crop_season(std::string crop, std::optional<Season> season) {
    SubQuery q;
    q.crop = std::move(crop);
    q.season = season;
    return q;
}

}  // namespace

TEST_CASE("path index covers the taxonomy") {
    CHECK(retriever().index().size() == 672);
    CHECK(PathRetriever::descriptor_text({Category::Fruits, "Apple", "PinkLady", Lifecycle::Maturation,
                                          Season::Summer, Health::Healthy}) ==
          "Fruits Apple Pink Lady Maturation Summer Healthy");
}

TEST_CASE("fully specified subqueries retrieve their own path") {
    const auto& tax = default_taxonomy();
    for (const auto& meta : enumerate_metadata(tax)) {
        const auto r = retriever().retrieve_paths({full(meta)});
        REQUIRE(r.paths.size() == 1);
        CHECK(r.paths[0] == format_path(meta, tax));
    }
}

TEST_CASE("retrieved paths honour every populated field") {
    const auto& tax = default_taxonomy();
    const auto metas = enumerate_metadata(tax);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, metas.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto& m = metas[pick(rng)];
        SubQuery q;
        q.crop = m.crop;
        if (coin(rng)) q.variety = m.variety;
        if (coin(rng)) q.lifecycle = m.lifecycle;
        if (coin(rng)) q.season = m.season;
        if (coin(rng)) q.health = m.health;
        const auto r = retriever().retrieve_paths({q});
        REQUIRE(r.paths.size() == 1);
        const auto got = parse_path(r.paths[0], tax);
        CHECK(matches_fields(q, got));
        CHECK(matches_fields(r.selections[0].request, got));
        CHECK(r.paths[0] == format_path(got, tax));
    }
}

TEST_CASE("defaults for an unspecified field") {
    const auto r = retriever().retrieve_paths({crop_season("Apple", std::nullopt)});
    REQUIRE(r.paths.size() == 1);
    const auto m = parse_path(r.paths[0], default_taxonomy());
    CHECK(m.variety == default_taxonomy().find_crop("Apple")->varieties.front());
    CHECK(m.lifecycle == Lifecycle::Maturation);
    CHECK(m.season == Season::Summer);
    CHECK(m.health == Health::Healthy);
}

TEST_CASE("category-only subquery expands to a crop of that category") {
    SubQuery q;
    q.category = Category::Vegetables;
    const auto r = retriever().retrieve_paths({q});
    REQUIRE(r.selections.size() == 1);
    CHECK(r.selections[0].expanded);
    CHECK(parse_path(r.paths[0], default_taxonomy()).category == Category::Vegetables);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("duplicate subqueries share one path") {
    const auto q = crop_season("Carrot", Season::Fall);
    const auto r = retriever().retrieve_paths({q, q});
    CHECK(r.paths.size() == 1);
    CHECK(r.selections.size() == 2);
}

TEST_CASE("season consistency") {
    const auto& tax = default_taxonomy();
    auto r = retriever().validate_consistency(
        retriever().retrieve_paths({crop_season("Apple", Season::Winter), crop_season("Carrot", std::nullopt)}));
    REQUIRE(r.paths.size() == 2);
    CHECK(parse_path(r.paths[0], tax).season == Season::Winter);
    CHECK(parse_path(r.paths[1], tax).season == Season::Winter);
    CHECK(parse_path(r.paths[1], tax).crop == "Carrot");
    CHECK_FALSE(r.warnings.empty());

    r = retriever().validate_consistency(
        retriever().retrieve_paths({crop_season("Apple", Season::Winter), crop_season("Carrot", Season::Spring)}));
    REQUIRE(r.paths.size() == 2);
    CHECK(parse_path(r.paths[0], tax).season == Season::Winter);
    CHECK(parse_path(r.paths[1], tax).season == Season::Spring);
    CHECK_FALSE(r.warnings.empty());

    const auto plain = retriever().retrieve_paths({crop_season("Apple", std::nullopt), crop_season("Carrot", std::nullopt)});
    const auto checked = retriever().validate_consistency(plain);
    CHECK(checked.paths == plain.paths);
    CHECK(checked.warnings == plain.warnings);
}

TEST_CASE("no match") {
    CHECK_THROWS_AS(retriever().retrieve_paths({crop_season("Mango", std::nullopt)}), NoMatchError);
    CHECK_THROWS_AS(retriever().retrieve_paths({}), NoMatchError);
    SubQuery bad = crop_season("Apple", std::nullopt);
    bad.variety = "Roma";
    CHECK_THROWS_AS(retriever().retrieve_paths({bad}), NoMatchError);
}

TEST_CASE("retrieval is deterministic and round-trips through JSON") {
    const std::vector<SubQuery> qs{crop_season("Tomato", Season::Spring), crop_season("Lettuce", std::nullopt)};
    const auto a = retriever().retrieve_paths(qs);
    const auto b = retriever().retrieve_paths(qs);
    CHECK(a.paths == b.paths);
    CHECK(a.to_json() == b.to_json());
    CHECK(RetrievalResult::from_json(a.to_json()).to_json() == a.to_json());
}
