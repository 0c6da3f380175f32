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

#include "sceneforge/planner.hpp"

namespace sceneforge {

class ChatProvider;

/// Engine units per meter in emitted scripts.
inline constexpr double kEngineUnitsPerMeter = 100.0;

struct ScriptText {
    std::string source;
    /// Path of the plan sidecar the script was generated from.
    std::string plan_ref;
};

/// Renders the plan as an editor Python script: one `import unreal`, a
/// FIELDS data table with one ((x, y, z), yaw, (sx, sy, sz)) row per
/// placement in engine units, and `setup_scene`, `spawn_field`, `main`.
/// Output is byte-identical for identical plans. Throws InvalidPlanError.
ScriptText emit_script(const ScenePlan& plan, const std::string& plan_ref = "scene.plan.json");

/// Asks a chat provider to write the script from the recipe and plan.
/// The reply is taken verbatim (minus code fences); callers validate it.
ScriptText emit_script_with_provider(const ScenePlan& plan, const SceneRecipe& recipe,
                                     ChatProvider& provider,
                                     const std::string& plan_ref = "scene.plan.json");

}  // namespace sceneforge
