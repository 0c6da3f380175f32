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
#include <string>
#include <vector>

#include "sceneforge/text.hpp"

using namespace sceneforge;

namespace {

std::size_t edit_distance_oracle(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1] ? 1u : 0u)});
        }
    }
    return d[a.size()][b.size()];
}

}  // namespace

TEST_CASE("fnv1a64 published vectors") {
    CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(text::fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(text::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("split_pascal and normalize_alnum") {
    CHECK(text::split_pascal("PinkLady") == "Pink Lady");
    CHECK(text::split_pascal("Gala") == "Gala");
    CHECK(text::split_pascal("LolloRosso") == "Lollo Rosso");
    CHECK(text::normalize_alnum("Pink-Lady ") == "pinklady");
    CHECK(text::iequals("GALA", "gala"));
    CHECK_FALSE(text::iequals("gala", "galas"));
    CHECK(text::trim("  x y \n") == "x y");
}

TEST_CASE("levenshtein agrees with a full-matrix oracle") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(0, 8), ch(0, 3);
    for (int n = 0; n < 500; ++n) {
        std::string a, b;
        for (int i = len(rng); i > 0; --i) a += static_cast<char>('a' + ch(rng));
        for (int i = len(rng); i > 0; --i) b += static_cast<char>('a' + ch(rng));
        CHECK(text::levenshtein(a, b) == edit_distance_oracle(a, b));
    }
    CHECK(text::levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("format_double round-trips and always reads as a float literal") {
    CHECK(text::format_double(0.0) == "0.0");
    CHECK(text::format_double(200.0) == "200.0");
    CHECK(text::format_double(1.05) == "1.05");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int n = 0; n < 1000; ++n) {
        const double x = u(rng);
        const auto s = text::format_double(x);
        CHECK(std::stod(s) == x);
        CHECK(s.find_first_of(".e") != std::string::npos);
    }
}

TEST_CASE("split keeps empty fields") {
    CHECK(text::split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
}
