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

#include "sceneforge/emitter.hpp"

#include <sstream>

#include "sceneforge/errors.hpp"
#include "sceneforge/providers.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

constexpr const char* kFunctions = R"py(

def setup_scene():
    return unreal.get_editor_subsystem(unreal.EditorActorSubsystem)


def spawn_field(actors, field):
    asset = unreal.EditorAssetLibrary.load_asset(field["asset"])
    if asset is None:
        raise RuntimeError("asset not found: " + field["asset"])
    spawned = []
    for location, yaw, scale in field["placements"]:
        actor = actors.spawn_actor_from_object(
            asset, unreal.Vector(*location), unreal.Rotator(roll=0.0, pitch=0.0, yaw=yaw))
        actor.set_actor_scale3d(unreal.Vector(*scale))
        spawned.append(actor)
    return spawned


def main():
    actors = setup_scene()
    for field in FIELDS:
        spawn_field(actors, field)


if __name__ == "__main__":
    main()
)py";

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string num(double v) { return text::format_double(v); }

}  // namespace

ScriptText emit_script(const ScenePlan& plan, const std::string& plan_ref) {
    plan.check();
    std::ostringstream out;
    out << "# Generated by sceneforge from " << plan_ref << "; do not edit by hand.\n"
        << "# Units: locations are engine units (1 m = 100 units); scale is uniform.\n"
        << "# Seed: " << plan.seed << "\n"
        << "import unreal\n\n"
        << "UNITS_PER_METER = " << num(kEngineUnitsPerMeter) << "\n\n"
        << "FIELDS = [\n";
    for (const auto& f : plan.fields) {
        out << "    {\n"
            << "        \"asset\": " << quoted(f.asset.str()) << ",\n"
            << "        \"entry_id\": " << quoted(f.entry_id) << ",\n"
            << "        \"rows\": " << f.rows << ",\n"
            << "        \"cols\": " << f.cols << ",\n"
            << "        \"row_spacing_m\": " << num(f.row_spacing_m) << ",\n"
            << "        \"plant_spacing_m\": " << num(f.plant_spacing_m) << ",\n"
            << "        \"placements\": [\n";
        for (const auto& p : f.placements) {
            const auto s = num(p.scale);
            out << "            ((" << num(p.position.x * kEngineUnitsPerMeter) << ", "
                << num(p.position.y * kEngineUnitsPerMeter) << ", "
                << num(p.position.z * kEngineUnitsPerMeter) << "), " << num(p.yaw_deg) << ", (" << s
                << ", " << s << ", " << s << ")),\n";
        }
        out << "        ],\n"
            << "    },\n";
    }
    out << "]\n" << kFunctions;
    return {out.str(), plan_ref};
}

ScriptText emit_script_with_provider(const ScenePlan& plan, const SceneRecipe& recipe,
                                     ChatProvider& provider, const std::string& plan_ref) {
    plan.check();
    const std::vector<ChatMessage> messages{
        {"system",
         "Write an Unreal Engine editor Python script that spawns the planned fields. Use "
         "unreal.EditorAssetLibrary.load_asset for every asset path exactly as given, spawn actors "
         "with EditorActorSubsystem.spawn_actor_from_object, convert meters to engine units (x100), "
         "apply yaw rotation and uniform scale. Define setup_scene, spawn_field and main. Reply "
         "with the script only."},
        {"user", "Recipe:\n" + recipe.to_json().dump() + "\nPlan:\n" + plan.to_json().dump()},
    };
    std::string reply = provider.chat(messages);
    if (const auto fence = reply.find("```"); fence != std::string::npos) {
        const auto body_start = reply.find('\n', fence);
        const auto close = reply.find("```", body_start == std::string::npos ? fence + 3 : body_start);
        if (body_start != std::string::npos && close != std::string::npos) {
            reply = reply.substr(body_start + 1, close - body_start - 1);
        }
    }
    return {reply, plan_ref};
}

}  // namespace sceneforge
