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

#include "sceneforge/planner.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "sceneforge/errors.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

nlohmann::json bbox_json(const BBox& b) {
    return {{"min_x", b.min_x}, {"min_y", b.min_y}, {"max_x", b.max_x}, {"max_y", b.max_y}};
}

BBox bbox_from(const nlohmann::json& j) {
    return {j.at("min_x").get<double>(), j.at("min_y").get<double>(), j.at("max_x").get<double>(),
            j.at("max_y").get<double>()};
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

YawStream::YawStream(std::uint64_t seed, std::size_t field_index)
    : engine_(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(field_index) + 1))) {}

double YawStream::next_yaw() {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return unit * 360.0;
}

double PlannerConfig::reference_height(std::string_view crop) const {
    for (const auto& [name, height] : reference_heights_m) {
        if (text::iequals(name, crop)) return height;
    }
    throw ConfigError("no reference height configured for crop '" + std::string(crop) + "'");
}

PlannerConfig PlannerConfig::from_json(const nlohmann::json& j) {
    PlannerConfig c;
    try {
        if (j.contains("reference_heights_m")) {
            c.reference_heights_m = j.at("reference_heights_m").get<std::map<std::string, double>>();
        }
        c.rows = j.value("rows", c.rows);
        c.cols = j.value("cols", c.cols);
        c.gap_m = j.value("gap_m", c.gap_m);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("planner config: ") + e.what());
    }
    for (const auto& [crop, h] : c.reference_heights_m) {
        if (!(h > 0.0)) throw ConfigError("planner config: reference height for " + crop + " must be positive");
    }
    if (c.rows < 1 || c.cols < 1) throw ConfigError("planner config: rows and cols must be >= 1");
    if (!(c.gap_m >= 0.0)) throw ConfigError("planner config: gap_m must be >= 0");
    return c;
}

BBox field_bbox(Point2 origin, int rows, int cols, double row_spacing_m, double plant_spacing_m) {
    const double margin = plant_spacing_m / 2.0;
    return {origin.x - margin, origin.y - margin,
            origin.x + (cols - 1) * plant_spacing_m + margin,
            origin.y + (rows - 1) * row_spacing_m + margin};
}

FieldPlan plan_field(const AssetPath& asset, const KnowledgeEntry& entry, int rows, int cols,
                     Point2 origin, YawStream& yaws, double reference_height_m) {
    if (rows < 1 || cols < 1) {
        throw InvalidDimensionError("field dimensions must be at least 1x1, got " + std::to_string(rows) +
                                    "x" + std::to_string(cols));
    }
    if (!(entry.row_spacing_m > 0.0) || !(entry.plant_spacing_m > 0.0)) {
        throw InvalidDimensionError("entry " + entry.id + " has non-positive spacing");
    }
    if (!(reference_height_m > 0.0)) throw InvalidDimensionError("reference height must be positive");
    const double scale = entry.plant_height_m / reference_height_m;
    if (!(scale >= kMinScale && scale <= kMaxScale)) {
        throw InvalidDimensionError("scale " + text::format_double(scale) + " for entry " + entry.id +
                                    " is outside [0.05, 20]");
    }

    FieldPlan field;
    field.asset = asset;
    field.entry_id = entry.id;
    field.rows = rows;
    field.cols = cols;
    field.origin = origin;
    field.row_spacing_m = entry.row_spacing_m;
    field.plant_spacing_m = entry.plant_spacing_m;
    field.plant_height_m = entry.plant_height_m;
    field.reference_height_m = reference_height_m;
    field.rendering_effects = entry.rendering_effects;
    field.placements.reserve(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            Placement p;
            p.asset = asset;
            p.position = {origin.x + j * entry.plant_spacing_m, origin.y + i * entry.row_spacing_m, 0.0};
            p.yaw_deg = yaws.next_yaw();
            p.scale = scale;
            field.placements.push_back(std::move(p));
        }
    }
    field.bbox = field_bbox(origin, rows, cols, entry.row_spacing_m, entry.plant_spacing_m);
    return field;
}

ScenePlan plan_scene(const SceneRecipe& recipe, std::uint64_t seed, const PlannerConfig& config) {
    if (recipe.lines.empty()) throw InvalidPlanError("recipe has no fields");
    ScenePlan plan;
    plan.seed = seed;
    std::optional<double> previous_max_x;
    for (const auto& line : recipe.lines) {
        if (line.quantity < 1) throw InvalidDimensionError("recipe quantity must be >= 1");
        const double reference = config.reference_height(line.entry.meta.crop);
        for (int copy = 0; copy < line.quantity; ++copy) {
            Point2 origin{0.0, 0.0};
            if (previous_max_x) {
                // Left bbox edge of the new field sits gap_m past the previous one.
                origin.x = *previous_max_x + config.gap_m + line.entry.plant_spacing_m / 2.0;
            }
            YawStream yaws(seed, plan.fields.size());
            plan.fields.push_back(plan_field(line.path, line.entry, line.rows, line.cols, origin, yaws, reference));
            previous_max_x = plan.fields.back().bbox.max_x;
        }
    }
    return plan;
}

std::size_t ScenePlan::placement_count() const {
    std::size_t n = 0;
    for (const auto& f : fields) n += f.placements.size();
    return n;
}

void ScenePlan::check() const {
    if (units != "m") throw InvalidPlanError("plan units must be \"m\", got \"" + units + "\"");
    if (fields.empty()) throw InvalidPlanError("plan has no fields");
    for (std::size_t n = 0; n < fields.size(); ++n) {
        const auto& f = fields[n];
        const auto where = "field " + std::to_string(n) + ": ";
        if (f.rows < 1 || f.cols < 1) throw InvalidPlanError(where + "bad dimensions");
        if (f.placements.size() != static_cast<std::size_t>(f.rows) * f.cols) {
            throw InvalidPlanError(where + "placement count differs from rows x cols");
        }
        const auto expected = field_bbox(f.origin, f.rows, f.cols, f.row_spacing_m, f.plant_spacing_m);
        if (std::abs(expected.min_x - f.bbox.min_x) > 1e-9 || std::abs(expected.max_x - f.bbox.max_x) > 1e-9 ||
            std::abs(expected.min_y - f.bbox.min_y) > 1e-9 || std::abs(expected.max_y - f.bbox.max_y) > 1e-9) {
            throw InvalidPlanError(where + "bounding box does not match the grid");
        }
        for (const auto& p : f.placements) {
            if (p.asset != f.asset) throw InvalidPlanError(where + "placement asset differs from field asset");
            if (p.position.z != 0.0) throw InvalidPlanError(where + "placement above ground");
            if (!f.bbox.contains(p.position.x, p.position.y)) {
                throw InvalidPlanError(where + "placement outside bounding box");
            }
            if (!(p.yaw_deg >= 0.0 && p.yaw_deg < 360.0)) throw InvalidPlanError(where + "yaw out of range");
            if (!(p.scale >= kMinScale && p.scale <= kMaxScale)) {
                throw InvalidPlanError(where + "scale out of range");
            }
        }
        for (std::size_t m = 0; m < n; ++m) {
            if (fields[m].bbox.intersects(f.bbox)) {
                throw InvalidPlanError("fields " + std::to_string(m) + " and " + std::to_string(n) +
                                       " overlap");
            }
        }
    }
}

nlohmann::json ScenePlan::to_json() const {
    nlohmann::json j;
    j["units"] = units;
    j["seed"] = seed;
    j["fields"] = nlohmann::json::array();
    for (const auto& f : fields) {
        nlohmann::json placements = nlohmann::json::array();
        for (const auto& p : f.placements) {
            placements.push_back({{"position", {p.position.x, p.position.y, p.position.z}},
                                  {"yaw_deg", p.yaw_deg},
                                  {"scale", p.scale}});
        }
        j["fields"].push_back({{"asset", f.asset.str()},
                               {"entry_id", f.entry_id},
                               {"rows", f.rows},
                               {"cols", f.cols},
                               {"origin", {f.origin.x, f.origin.y}},
                               {"row_spacing_m", f.row_spacing_m},
                               {"plant_spacing_m", f.plant_spacing_m},
                               {"plant_height_m", f.plant_height_m},
                               {"reference_height_m", f.reference_height_m},
                               {"rendering_effects", f.rendering_effects},
                               {"bbox", bbox_json(f.bbox)},
                               {"placements", placements}});
    }
    return j;
}

ScenePlan ScenePlan::from_json(const nlohmann::json& j) {
    ScenePlan plan;
    try {
        plan.units = j.at("units").get<std::string>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& fj : j.at("fields")) {
            FieldPlan f;
            f.asset = AssetPath(fj.at("asset").get<std::string>());
            f.entry_id = fj.at("entry_id").get<std::string>();
            f.rows = fj.at("rows").get<int>();
            f.cols = fj.at("cols").get<int>();
            f.origin = {fj.at("origin").at(0).get<double>(), fj.at("origin").at(1).get<double>()};
            f.row_spacing_m = fj.at("row_spacing_m").get<double>();
            f.plant_spacing_m = fj.at("plant_spacing_m").get<double>();
            f.plant_height_m = fj.at("plant_height_m").get<double>();
            f.reference_height_m = fj.at("reference_height_m").get<double>();
            f.rendering_effects = fj.value("rendering_effects", std::vector<std::string>{});
            f.bbox = bbox_from(fj.at("bbox"));
            for (const auto& pj : fj.at("placements")) {
                Placement p;
                p.asset = f.asset;
                const auto& pos = pj.at("position");
                p.position = {pos.at(0).get<double>(), pos.at(1).get<double>(), pos.at(2).get<double>()};
                p.yaw_deg = pj.at("yaw_deg").get<double>();
                p.scale = pj.at("scale").get<double>();
                f.placements.push_back(std::move(p));
            }
            plan.fields.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("scene plan: ") + e.what());
    }
    return plan;
}

ScenePlan ScenePlan::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open plan file " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("plan file " + file.string() + ": " + e.what());
    }
    return from_json(j);
}

}  // namespace sceneforge
