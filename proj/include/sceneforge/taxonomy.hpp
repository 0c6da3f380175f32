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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sceneforge {

enum class Category : std::uint8_t { Fruits, Vegetables };
enum class Lifecycle : std::uint8_t { Vegetative, Reproductive, Maturation };
enum class Season : std::uint8_t { Spring, Summer, Fall, Winter };
enum class Health : std::uint8_t { Healthy, Ill };

inline constexpr std::array kAllCategories{Category::Fruits, Category::Vegetables};
inline constexpr std::array kAllLifecycles{Lifecycle::Vegetative, Lifecycle::Reproductive,
                                           Lifecycle::Maturation};
inline constexpr std::array kAllSeasons{Season::Spring, Season::Summer, Season::Fall,
                                        Season::Winter};
inline constexpr std::array kAllHealths{Health::Healthy, Health::Ill};

std::string_view to_string(Category v);
std::string_view to_string(Lifecycle v);
std::string_view to_string(Season v);
std::string_view to_string(Health v);

// Case-insensitive lookups of the canonical PascalCase names.
std::optional<Category> category_from_string(std::string_view s);
std::optional<Lifecycle> lifecycle_from_string(std::string_view s);
std::optional<Season> season_from_string(std::string_view s);
std::optional<Health> health_from_string(std::string_view s);

/// Fully populated six-field descriptor of one asset variant.
struct AssetMetadata {
    Category category = Category::Fruits;
    std::string crop;
    std::string variety;
    Lifecycle lifecycle = Lifecycle::Maturation;
    Season season = Season::Summer;
    Health health = Health::Healthy;

    friend bool operator==(const AssetMetadata&, const AssetMetadata&) = default;
};

/// Canonical engine path:
/// /Game/<Category>/<Crop>/<Variety>/<Lifecycle>/<Season>/<Health>/<Variety>_<Lifecycle>_<Season>_<Health>.fbx
class AssetPath {
public:
    AssetPath() = default;
    explicit AssetPath(std::string raw) : raw_(std::move(raw)) {}

    const std::string& str() const noexcept { return raw_; }

    friend auto operator<=>(const AssetPath&, const AssetPath&) = default;

private:
    std::string raw_;
};

inline constexpr std::string_view kPathPrefix = "/Game/";
inline constexpr std::string_view kPathSuffix = ".fbx";

/// Enumerable crop hierarchy. Immutable once constructed; every public
/// operation is a pure function of the config.
class TaxonomyConfig {
public:
    struct CropInfo {
        std::string name;
        Category category;
        std::vector<std::string> varieties;
    };

    /// Validates the structure; throws ConfigError on duplicate or empty
    /// identifier lists.
    TaxonomyConfig(std::vector<CropInfo> crops, std::vector<Lifecycle> lifecycles,
                   std::vector<Season> seasons, std::vector<Health> healths);

    static TaxonomyConfig from_json(const nlohmann::json& doc);
    static TaxonomyConfig load(const std::filesystem::path& file);
    nlohmann::json to_json() const;

    /// Crops in config order (categories in config order, then crops).
    const std::vector<CropInfo>& crops() const noexcept { return crops_; }
    const std::vector<Lifecycle>& lifecycles() const noexcept { return lifecycles_; }
    const std::vector<Season>& seasons() const noexcept { return seasons_; }
    const std::vector<Health>& healths() const noexcept { return healths_; }
    std::vector<Category> categories() const;

    const CropInfo* find_crop(std::string_view name) const;
    /// Canonical spelling of a variety of `crop`, case-insensitive lookup.
    std::optional<std::string> find_variety(std::string_view crop, std::string_view variety) const;
    std::vector<const CropInfo*> crops_in(Category category) const;

    bool has(Lifecycle v) const;
    bool has(Season v) const;
    bool has(Health v) const;

    std::size_t variety_count() const;
    /// varieties x lifecycles x seasons x healths.
    std::size_t combination_count() const;

    /// Throws UnknownTaxonError when any field is outside the config.
    void check(const AssetMetadata& meta) const;

    /// Canonicalizes identifier spelling (case-insensitive match) and
    /// checks membership. Throws UnknownTaxonError.
    AssetMetadata canonicalize(const AssetMetadata& meta) const;

    /// 64-bit fingerprint of the canonical JSON form.
    std::uint64_t fingerprint() const;

private:
    std::vector<CropInfo> crops_;
    std::vector<Lifecycle> lifecycles_;
    std::vector<Season> seasons_;
    std::vector<Health> healths_;
};

/// All combinations, sorted lexicographically by path string.
std::vector<AssetPath> enumerate_paths(const TaxonomyConfig& config);
/// Metadata of every combination in config order.
std::vector<AssetMetadata> enumerate_metadata(const TaxonomyConfig& config);

AssetPath format_path(const AssetMetadata& meta, const TaxonomyConfig& config);
AssetMetadata parse_path(const AssetPath& path, const TaxonomyConfig& config);
inline AssetMetadata parse_path(std::string_view path, const TaxonomyConfig& config) {
    return parse_path(AssetPath(std::string(path)), config);
}

nlohmann::json to_json(const AssetMetadata& meta);
AssetMetadata metadata_from_json(const nlohmann::json& j);

}  // namespace sceneforge
