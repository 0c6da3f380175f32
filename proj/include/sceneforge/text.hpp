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


#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.
namespace sceneforge::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// "PinkLady" -> "Pink Lady", "GreenZebra" -> "Green Zebra".
std::string split_pascal(std::string_view identifier);

/// Lowercase and drop every non-alphanumeric byte ("Pink-Lady" -> "pinklady").
std::string normalize_alnum(std::string_view s);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// 64-bit FNV-1a. `basis` defaults to the standard offset basis.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

/// Shortest decimal representation that round-trips to the same double,
/// always containing a '.' or exponent so it reads back as a float.
std::string format_double(double value);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace sceneforge::text
