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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/emitter.hpp"
#include "sceneforge/knowledge.hpp"
#include "sceneforge/planner.hpp"
#include "sceneforge/taxonomy.hpp"

namespace sceneforge {

enum class Severity { Error, Warning };

struct Finding {
    std::string rule_id;
    Severity severity = Severity::Error;
    std::string message;
    /// "line N", "field N" or "script".
    std::string location;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool passed = true;  ///< no error-severity findings

    bool has_error(std::string_view rule_id) const;
    std::size_t error_count() const;
    nlohmann::json to_json() const;
};

/// Lexical checks of a script against its plan (and the recipe, when
/// available):
///   R1  every asset string parses as a canonical asset path
///   R2  script and plan reference the same assets, field by field
///   R3  engine API use: module import, spawn from a loaded asset
///       variable, attachment rule constants, no constructed singletons
///   R4  uniform scale equals the plan scale, which equals the
///       entry-derived scale (height / reference height)
///   R5  spawn count equals the plan placement count
///   R6  declared and recovered spacing equal the entry spacing;
///       locations equal the plan locations
/// Structural gaps (missing setup_scene/spawn_field/main) are warnings.
/// Never throws on script content.
ValidationReport validate(const ScriptText& script, const ScenePlan& plan,
                          const TaxonomyConfig& taxonomy, const SceneRecipe* recipe = nullptr);

}  // namespace sceneforge
