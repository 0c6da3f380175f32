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

#include "sceneforge/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sceneforge/errors.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> enum_from_string(std::string_view s, const std::array<Enum, N>& all) {
    for (Enum v : all) {
        if (text::iequals(to_string(v), s)) return v;
    }
    return std::nullopt;
}

bool is_identifier(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) != 0;
    });
}

template <typename T>
void require_unique_nonempty(const std::vector<T>& items, std::string_view what) {
    if (items.empty()) throw ConfigError("taxonomy: empty " + std::string(what) + " list");
    std::set<T> seen(items.begin(), items.end());
    if (seen.size() != items.size()) {
        throw ConfigError("taxonomy: duplicate entry in " + std::string(what));
    }
}

template <typename Enum, std::size_t N>
std::vector<Enum> parse_enum_list(const nlohmann::json& doc, const char* key,
                                  const std::array<Enum, N>& all) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
        throw ConfigError(std::string("taxonomy: missing array '") + key + "'");
    }
    std::vector<Enum> out;
    for (const auto& item : doc.at(key)) {
        const auto name = item.get<std::string>();
        std::optional<Enum> v;
        for (Enum e : all) {
            if (to_string(e) == name) v = e;
        }
        if (!v) throw ConfigError(std::string("taxonomy: unknown value '") + name + "' in " + key);
        out.push_back(*v);
    }
    return out;
}

}  // namespace

std::string_view to_string(Category v) {
    switch (v) {
        case Category::Fruits: return "Fruits";
        case Category::Vegetables: return "Vegetables";
    }
    return "?";
}

std::string_view to_string(Lifecycle v) {
    switch (v) {
        case Lifecycle::Vegetative: return "Vegetative";
        case Lifecycle::Reproductive: return "Reproductive";
        case Lifecycle::Maturation: return "Maturation";
    }
    return "?";
}

std::string_view to_string(Season v) {
    switch (v) {
        case Season::Spring: return "Spring";
        case Season::Summer: return "Summer";
        case Season::Fall: return "Fall";
        case Season::Winter: return "Winter";
    }
    return "?";
}

std::string_view to_string(Health v) {
    switch (v) {
        case Health::Healthy: return "Healthy";
        case Health::Ill: return "Ill";
    }
    return "?";
}

std::optional<Category> category_from_string(std::string_view s) {
    return enum_from_string(s, kAllCategories);
}
std::optional<Lifecycle> lifecycle_from_string(std::string_view s) {
    return enum_from_string(s, kAllLifecycles);
}
std::optional<Season> season_from_string(std::string_view s) {
    return enum_from_string(s, kAllSeasons);
}
std::optional<Health> health_from_string(std::string_view s) {
    return enum_from_string(s, kAllHealths);
}

TaxonomyConfig::TaxonomyConfig(std::vector<CropInfo> crops, std::vector<Lifecycle> lifecycles,
                               std::vector<Season> seasons, std::vector<Health> healths)
    : crops_(std::move(crops)),
      lifecycles_(std::move(lifecycles)),
      seasons_(std::move(seasons)),
      healths_(std::move(healths)) {
    if (crops_.empty()) throw ConfigError("taxonomy: no crops");
    std::set<std::string> crop_names;
    for (const auto& crop : crops_) {
        if (!is_identifier(crop.name)) {
            throw ConfigError("taxonomy: invalid crop identifier '" + crop.name + "'");
        }
        if (!crop_names.insert(text::to_lower(crop.name)).second) {
            throw ConfigError("taxonomy: duplicate crop '" + crop.name + "'");
        }
        if (crop.varieties.empty()) {
            throw ConfigError("taxonomy: crop '" + crop.name + "' has no varieties");
        }
        std::set<std::string> seen;
        for (const auto& variety : crop.varieties) {
            if (!is_identifier(variety)) {
                throw ConfigError("taxonomy: invalid variety identifier '" + variety + "'");
            }
            if (!seen.insert(text::to_lower(variety)).second) {
                throw ConfigError("taxonomy: duplicate variety '" + variety + "' for crop '" +
                                  crop.name + "'");
            }
        }
    }
    require_unique_nonempty(lifecycles_, "lifecycles");
    require_unique_nonempty(seasons_, "seasons");
    require_unique_nonempty(healths_, "healths");
}

TaxonomyConfig TaxonomyConfig::from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object()) throw ConfigError("taxonomy: document must be an object");
        for (const char* key : {"categories", "varieties"}) {
            if (!doc.contains(key) || !doc.at(key).is_object()) {
                throw ConfigError(std::string("taxonomy: missing object '") + key + "'");
            }
        }
        std::vector<CropInfo> crops;
        const auto& varieties = doc.at("varieties");
        // nlohmann::json objects iterate in key order; categories are
        // ordered by the Category enum instead so the config order is stable.
        for (Category category : kAllCategories) {
            const auto name = std::string(to_string(category));
            if (!doc.at("categories").contains(name)) continue;
            for (const auto& crop_json : doc.at("categories").at(name)) {
                CropInfo info{crop_json.get<std::string>(), category, {}};
                if (!varieties.contains(info.name)) {
                    throw ConfigError("taxonomy: no varieties listed for crop '" + info.name + "'");
                }
                info.varieties = varieties.at(info.name).get<std::vector<std::string>>();
                crops.push_back(std::move(info));
            }
        }
        for (const auto& [key, _] : doc.at("categories").items()) {
            if (!category_from_string(key) || std::string(to_string(*category_from_string(key))) != key) {
                throw ConfigError("taxonomy: unknown category '" + key + "'");
            }
        }
        for (const auto& [crop, _] : varieties.items()) {
            const bool listed = std::any_of(crops.begin(), crops.end(),
                                            [&](const CropInfo& c) { return c.name == crop; });
            if (!listed) throw ConfigError("taxonomy: varieties given for unlisted crop '" + crop + "'");
        }
        return TaxonomyConfig(std::move(crops), parse_enum_list(doc, "lifecycles", kAllLifecycles),
                              parse_enum_list(doc, "seasons", kAllSeasons),
                              parse_enum_list(doc, "healths", kAllHealths));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("taxonomy: ") + e.what());
    }
}

TaxonomyConfig TaxonomyConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("taxonomy: cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("taxonomy: " + file.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json TaxonomyConfig::to_json() const {
    nlohmann::json doc;
    doc["categories"] = nlohmann::json::object();
    doc["varieties"] = nlohmann::json::object();
    for (const auto& crop : crops_) {
        doc["categories"][std::string(sceneforge::to_string(crop.category))].push_back(crop.name);
        doc["varieties"][crop.name] = crop.varieties;
    }
    for (auto v : lifecycles_) doc["lifecycles"].push_back(sceneforge::to_string(v));
    for (auto v : seasons_) doc["seasons"].push_back(sceneforge::to_string(v));
    for (auto v : healths_) doc["healths"].push_back(sceneforge::to_string(v));
    return doc;
}

std::vector<Category> TaxonomyConfig::categories() const {
    std::vector<Category> out;
    for (const auto& crop : crops_) {
        if (std::find(out.begin(), out.end(), crop.category) == out.end()) {
            out.push_back(crop.category);
        }
    }
    return out;
}

const TaxonomyConfig::CropInfo* TaxonomyConfig::find_crop(std::string_view name) const {
    for (const auto& crop : crops_) {
        if (text::iequals(crop.name, name)) return &crop;
    }
    return nullptr;
}

std::optional<std::string> TaxonomyConfig::find_variety(std::string_view crop,
                                                        std::string_view variety) const {
    const auto* info = find_crop(crop);
    if (info == nullptr) return std::nullopt;
    for (const auto& v : info->varieties) {
        if (text::iequals(v, variety)) return v;
    }
    return std::nullopt;
}

std::vector<const TaxonomyConfig::CropInfo*> TaxonomyConfig::crops_in(Category category) const {
    std::vector<const CropInfo*> out;
    for (const auto& crop : crops_) {
        if (crop.category == category) out.push_back(&crop);
    }
    return out;
}

bool TaxonomyConfig::has(Lifecycle v) const {
    return std::find(lifecycles_.begin(), lifecycles_.end(), v) != lifecycles_.end();
}
bool TaxonomyConfig::has(Season v) const {
    return std::find(seasons_.begin(), seasons_.end(), v) != seasons_.end();
}
bool TaxonomyConfig::has(Health v) const {
    return std::find(healths_.begin(), healths_.end(), v) != healths_.end();
}

std::size_t TaxonomyConfig::variety_count() const {
    std::size_t n = 0;
    for (const auto& crop : crops_) n += crop.varieties.size();
    return n;
}

std::size_t TaxonomyConfig::combination_count() const {
    return variety_count() * lifecycles_.size() * seasons_.size() * healths_.size();
}

void TaxonomyConfig::check(const AssetMetadata& meta) const {
    const auto* crop = find_crop(meta.crop);
    if (crop == nullptr || crop->name != meta.crop) {
        throw UnknownTaxonError("unknown crop '" + meta.crop + "'");
    }
    if (crop->category != meta.category) {
        throw UnknownTaxonError("crop '" + meta.crop + "' is not in category " +
                                std::string(to_string(meta.category)));
    }
    if (std::find(crop->varieties.begin(), crop->varieties.end(), meta.variety) ==
        crop->varieties.end()) {
        throw UnknownTaxonError("unknown variety '" + meta.variety + "' for crop '" + meta.crop + "'");
    }
    if (!has(meta.lifecycle)) {
        throw UnknownTaxonError("lifecycle " + std::string(to_string(meta.lifecycle)) + " not configured");
    }
    if (!has(meta.season)) {
        throw UnknownTaxonError("season " + std::string(to_string(meta.season)) + " not configured");
    }
    if (!has(meta.health)) {
        throw UnknownTaxonError("health " + std::string(to_string(meta.health)) + " not configured");
    }
}

AssetMetadata TaxonomyConfig::canonicalize(const AssetMetadata& meta) const {
    AssetMetadata out = meta;
    const auto* crop = find_crop(meta.crop);
    if (crop == nullptr) throw UnknownTaxonError("unknown crop '" + meta.crop + "'");
    out.crop = crop->name;
    auto variety = find_variety(crop->name, meta.variety);
    if (!variety) {
        throw UnknownTaxonError("unknown variety '" + meta.variety + "' for crop '" + crop->name + "'");
    }
    out.variety = *variety;
    check(out);
    return out;
}

std::uint64_t TaxonomyConfig::fingerprint() const { return text::fnv1a64(to_json().dump()); }

std::vector<AssetMetadata> enumerate_metadata(const TaxonomyConfig& config) {
    std::vector<AssetMetadata> out;
    out.reserve(config.combination_count());
    for (const auto& crop : config.crops()) {
        for (const auto& variety : crop.varieties) {
            for (auto lifecycle : config.lifecycles()) {
                for (auto season : config.seasons()) {
                    for (auto health : config.healths()) {
                        out.push_back({crop.category, crop.name, variety, lifecycle, season, health});
                    }
                }
            }
        }
    }
    return out;
}

std::vector<AssetPath> enumerate_paths(const TaxonomyConfig& config) {
    std::vector<AssetPath> out;
    for (const auto& meta : enumerate_metadata(config)) out.push_back(format_path(meta, config));
    std::sort(out.begin(), out.end());
    return out;
}

AssetPath format_path(const AssetMetadata& meta, const TaxonomyConfig& config) {
    config.check(meta);
    const std::string lifecycle(to_string(meta.lifecycle));
    const std::string season(to_string(meta.season));
    const std::string health(to_string(meta.health));
    std::string raw(kPathPrefix);
    raw += std::string(to_string(meta.category)) + "/" + meta.crop + "/" + meta.variety + "/" +
           lifecycle + "/" + season + "/" + health + "/" + meta.variety + "_" + lifecycle + "_" +
           season + "_" + health + std::string(kPathSuffix);
    return AssetPath(std::move(raw));
}

AssetMetadata parse_path(const AssetPath& path, const TaxonomyConfig& config) {
    const std::string_view raw = path.str();
    if (!raw.starts_with(kPathPrefix)) {
        throw MalformedPathError("asset path must start with /Game/: '" + path.str() + "'");
    }
    if (!raw.ends_with(kPathSuffix)) {
        throw MalformedPathError("asset path must end with .fbx: '" + path.str() + "'");
    }
    const auto body = raw.substr(kPathPrefix.size());
    const auto segments = text::split(body, '/');
    if (segments.size() != 7) {
        throw MalformedPathError("asset path must have 7 segments after /Game/: '" + path.str() + "'");
    }
    const std::string& file = segments[6];
    const auto stem = std::string_view(file).substr(0, file.size() - kPathSuffix.size());
    const auto parts = text::split(stem, '_');
    if (parts.size() != 4 || parts[0] != segments[2] || parts[1] != segments[3] ||
        parts[2] != segments[4] || parts[3] != segments[5]) {
        throw MalformedPathError("file name does not match directory segments: '" + path.str() + "'");
    }

    auto exact = [&](auto parsed, const std::string& seg, const char* what) {
        if (!parsed || to_string(*parsed) != seg) {
            throw UnknownTaxonError(std::string("unknown ") + what + " '" + seg + "'");
        }
        return *parsed;
    };
    AssetMetadata meta;
    meta.category = exact(category_from_string(segments[0]), segments[0], "category");
    meta.crop = segments[1];
    meta.variety = segments[2];
    meta.lifecycle = exact(lifecycle_from_string(segments[3]), segments[3], "lifecycle");
    meta.season = exact(season_from_string(segments[4]), segments[4], "season");
    meta.health = exact(health_from_string(segments[5]), segments[5], "health");
    config.check(meta);
    return meta;
}

nlohmann::json to_json(const AssetMetadata& meta) {
    return {{"category", to_string(meta.category)}, {"crop", meta.crop},
            {"variety", meta.variety},              {"lifecycle", to_string(meta.lifecycle)},
            {"season", to_string(meta.season)},     {"health", to_string(meta.health)}};
}

AssetMetadata metadata_from_json(const nlohmann::json& j) {
    auto field = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_string()) {
            throw FormatError(std::string("metadata: missing string field '") + key + "'");
        }
        return j.at(key).get<std::string>();
    };
    auto require = [](auto parsed, const std::string& value, const char* what) {
        if (!parsed) throw UnknownTaxonError(std::string("unknown ") + what + " '" + value + "'");
        return *parsed;
    };
    AssetMetadata meta;
    const auto category = field("category");
    const auto lifecycle = field("lifecycle");
    const auto season = field("season");
    const auto health = field("health");
    meta.category = require(category_from_string(category), category, "category");
    meta.crop = field("crop");
    meta.variety = field("variety");
    meta.lifecycle = require(lifecycle_from_string(lifecycle), lifecycle, "lifecycle");
    meta.season = require(season_from_string(season), season, "season");
    meta.health = require(health_from_string(health), health, "health");
    return meta;
}

}  // namespace sceneforge
