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
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/knowledge.hpp"
#include "sceneforge/taxonomy.hpp"

namespace sceneforge {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Closed axis-aligned rectangle in meters.
struct BBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    bool contains(double x, double y) const {
        return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
    }
    bool intersects(const BBox& o) const {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
    double width() const { return max_x - min_x; }
    friend bool operator==(const BBox&, const BBox&) = default;
};

inline constexpr double kMinScale = 0.05;
inline constexpr double kMaxScale = 20.0;

struct Placement {
    AssetPath asset;
    Vec3 position;  ///< meters, z = 0
    double yaw_deg = 0.0;
    double scale = 1.0;
    friend bool operator==(const Placement&, const Placement&) = default;
};

struct FieldPlan {
    AssetPath asset;
    std::string entry_id;
    int rows = 0;
    int cols = 0;
    Point2 origin;
    double row_spacing_m = 0.0;
    double plant_spacing_m = 0.0;
    /// Entry height and the crop's reference height; scale is their ratio.
    double plant_height_m = 0.0;
    double reference_height_m = 0.0;
    std::vector<std::string> rendering_effects;
    std::vector<Placement> placements;
    BBox bbox;
    friend bool operator==(const FieldPlan&, const FieldPlan&) = default;
};

struct ScenePlan {
    std::uint64_t seed = 0;
    std::vector<FieldPlan> fields;
    std::string units = "m";

    std::size_t placement_count() const;

    /// Throws InvalidPlanError naming the first violated invariant.
    void check() const;

    nlohmann::json to_json() const;
    static ScenePlan from_json(const nlohmann::json& j);
    static ScenePlan load(const std::filesystem::path& file);

    friend bool operator==(const ScenePlan&, const ScenePlan&) = default;
};

struct PlannerConfig {
    /// Crop -> height (m) rendered at scale 1.
    std::map<std::string, double> reference_heights_m;
    int rows = 10;
    int cols = 10;
    double gap_m = 10.0;

    /// Throws ConfigError for an unknown crop.
    double reference_height(std::string_view crop) const;

    static PlannerConfig from_json(const nlohmann::json& j);
};

/// Per-field yaw generator: std::mt19937_64 seeded with
/// splitmix64(seed + 0x9E3779B97F4A7C15 * (field_index + 1)), where
/// splitmix64 is one step of the standard SplitMix64 generator from that
/// state. Yaw is (next() >> 11) * 2^-53 * 360, in [0, 360).
class YawStream {
public:
    YawStream(std::uint64_t seed, std::size_t field_index);
    double next_yaw();

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Grid of rows x cols placements. Placement (i, j) sits at
/// origin + (j * plant_spacing, i * row_spacing, 0); yaws are drawn in
/// row-major order. Throws InvalidDimensionError.
FieldPlan plan_field(const AssetPath& asset, const KnowledgeEntry& entry, int rows, int cols,
                     Point2 origin, YawStream& yaws, double reference_height_m);

/// Bounding box of a grid, expanded by plant_spacing / 2 on every side.
BBox field_bbox(Point2 origin, int rows, int cols, double row_spacing_m, double plant_spacing_m);

/// Lays fields out left to right along +x in recipe order, with gap_m of
/// clear ground between consecutive bounding boxes. A recipe line with
/// quantity q yields q fields.
ScenePlan plan_scene(const SceneRecipe& recipe, std::uint64_t seed, const PlannerConfig& config);

}  // namespace sceneforge
