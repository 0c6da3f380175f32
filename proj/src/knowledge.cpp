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

#include "sceneforge/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "sceneforge/errors.hpp"
#include "sceneforge/retrieval.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

std::string_view to_string(Susceptibility s) {
    switch (s) {
        case Susceptibility::Low: return "low";
        case Susceptibility::Medium: return "medium";
        case Susceptibility::High: return "high";
    }
    return "?";
}

std::string_view to_string(Irrigation i) {
    switch (i) {
        case Irrigation::Drip: return "drip";
        case Irrigation::Sprinkler: return "sprinkler";
        case Irrigation::Rainfed: return "rainfed";
    }
    return "?";
}

Susceptibility susceptibility_from(const std::string& s) {
    if (s == "low") return Susceptibility::Low;
    if (s == "medium") return Susceptibility::Medium;
    if (s == "high") return Susceptibility::High;
    throw FormatError("knowledge entry: bad disease_susceptibility '" + s + "'");
}

Irrigation irrigation_from(const std::string& s) {
    if (s == "drip") return Irrigation::Drip;
    if (s == "sprinkler") return Irrigation::Sprinkler;
    if (s == "rainfed") return Irrigation::Rainfed;
    throw FormatError("knowledge entry: bad irrigation '" + s + "'");
}

std::string_view lifecycle_adjective(Lifecycle v) {
    switch (v) {
        case Lifecycle::Vegetative: return "young";
        case Lifecycle::Reproductive: return "flowering";
        case Lifecycle::Maturation: return "mature";
    }
    return "?";
}

std::string_view health_adjective(Health v) {
    switch (v) {
        case Health::Healthy: return "healthy";
        case Health::Ill: return "diseased";
    }
    return "?";
}

RecipeLine resolve_one(const AssetPath& path, const KnowledgeBase& kb, const TaxonomyConfig& taxonomy,
                       const EnrichOptions& options, FallbackLog* log, SceneRecipe& recipe) {
    const auto meta = parse_path(path, taxonomy);
    RecipeLine line;
    line.path = path;
    line.rows = options.rows;
    line.cols = options.cols;

    const auto hits = knowledge_candidates(path, kb, taxonomy, options.mode == KbMode::Rag ? 1 : options.k,
                                           options.mode);
    if (options.mode == KbMode::Rag) {
        // No metadata filter: the nearest entry is taken as-is.
        const auto* entry = kb.find_id(hits.front().id);
        line.entry = *entry;
        line.rank = 1;
        line.matched = strict_match(*entry, meta);
        return line;
    }

    for (std::size_t rank = 0; rank < hits.size(); ++rank) {
        const auto* entry = kb.find_id(hits[rank].id);
        if (strict_match(*entry, meta)) {
            line.entry = *entry;
            line.rank = rank + 1;
            return line;
        }
    }

    nlohmann::json event{{"path", path.str()},
                         {"reason", "no candidate in top-k passed the strict metadata filter"},
                         {"k", options.k}};
    event["candidates"] = nlohmann::json::array();
    for (const auto& h : hits) event["candidates"].push_back(h.id);
    recipe.fallbacks.push_back(path);

    if (const auto* exact = kb.find_exact(meta)) {
        line.entry = *exact;
        line.resolution = Resolution::ExactLookup;
    } else if (const auto* fallback = kb.crop_default(meta.crop)) {
        line.entry = *fallback;
        line.resolution = Resolution::CropDefault;
        line.matched = strict_match(*fallback, meta);
        recipe.warnings.push_back("knowledge: using crop default entry " + fallback->id + " for " +
                                  path.str());
    } else {
        event["resolution"] = "error";
        if (log != nullptr) log->record(event);
        throw NoMatchError("no knowledge entry for crop '" + meta.crop + "' (" + path.str() + ")");
    }
    event["resolution"] = to_string(line.resolution);
    event["entry_id"] = line.entry.id;
    if (log != nullptr) log->record(std::move(event));
    return line;
}

}  // namespace

void KnowledgeEntry::validate() const {
    if (id.empty()) throw FormatError("knowledge entry: empty id");
    for (auto [value, name] : {std::pair{plant_height_m, "plant_height_m"},
                               std::pair{row_spacing_m, "row_spacing_m"},
                               std::pair{plant_spacing_m, "plant_spacing_m"},
                               std::pair{density_per_ha, "density_per_ha"}}) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw FormatError("knowledge entry " + id + ": " + name + " must be positive");
        }
    }
    const double implied = 10000.0 / (row_spacing_m * plant_spacing_m);
    if (std::abs(density_per_ha - implied) / density_per_ha > 0.10) {
        throw FormatError("knowledge entry " + id + ": density " + text::format_double(density_per_ha) +
                          " inconsistent with spacing (implies " + text::format_double(implied) + ")");
    }
}

nlohmann::json KnowledgeEntry::to_json() const {
    nlohmann::json j{{"id", id},
                     {"meta", sceneforge::to_json(meta)},
                     {"plant_height_m", plant_height_m},
                     {"row_spacing_m", row_spacing_m},
                     {"plant_spacing_m", plant_spacing_m},
                     {"density_per_ha", density_per_ha},
                     {"disease_susceptibility", to_string(disease_susceptibility)},
                     {"irrigation", to_string(irrigation)},
                     {"rendering_effects", rendering_effects}};
    if (text) j["text"] = *text;
    return j;
}

KnowledgeEntry KnowledgeEntry::from_json(const nlohmann::json& j) {
    KnowledgeEntry e;
    try {
        e.id = j.at("id").get<std::string>();
        e.meta = metadata_from_json(j.at("meta"));
        e.plant_height_m = j.at("plant_height_m").get<double>();
        e.row_spacing_m = j.at("row_spacing_m").get<double>();
        e.plant_spacing_m = j.at("plant_spacing_m").get<double>();
        e.density_per_ha = j.at("density_per_ha").get<double>();
        e.disease_susceptibility = susceptibility_from(j.at("disease_susceptibility").get<std::string>());
        e.irrigation = irrigation_from(j.at("irrigation").get<std::string>());
        e.rendering_effects = j.value("rendering_effects", std::vector<std::string>{});
        if (j.contains("text")) e.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("knowledge entry: ") + ex.what());
    } catch (const UnknownTaxonError& ex) {
        throw FormatError(std::string("knowledge entry: ") + ex.what());
    }
    return e;
}

std::string descriptor_for(const AssetMetadata& meta) {
    return std::string(health_adjective(meta.health)) + " " +
           std::string(lifecycle_adjective(meta.lifecycle)) + " " + text::split_pascal(meta.variety) +
           " " + text::to_lower(meta.crop) + " in " + text::to_lower(to_string(meta.season));
}

bool varieties_match(std::string_view a, std::string_view b) {
    const auto x = text::normalize_alnum(a);
    const auto y = text::normalize_alnum(b);
    return x == y || text::levenshtein(x, y) <= 1;
}

bool strict_match(const KnowledgeEntry& entry, const AssetMetadata& meta) {
    const auto& e = entry.meta;
    return e.category == meta.category && text::iequals(e.crop, meta.crop) &&
           e.lifecycle == meta.lifecycle && e.season == meta.season && e.health == meta.health &&
           varieties_match(e.variety, meta.variety);
}

KnowledgeBase::KnowledgeBase(const TaxonomyConfig& taxonomy, std::vector<KnowledgeEntry> entries,
                             std::shared_ptr<Embedder> embedder, std::optional<VectorIndex> prebuilt)
    : entries_(std::move(entries)), embedder_(std::move(embedder)), taxonomy_(taxonomy) {
    if (entries_.empty()) throw EmptyKnowledgeBaseError("knowledge base has no entries");
    std::set<std::string> ids;
    for (const auto& e : entries_) {
        e.validate();
        taxonomy.check(e.meta);
        if (!ids.insert(e.id).second) throw FormatError("knowledge base: duplicate id '" + e.id + "'");
    }
    if (prebuilt) {
        if (prebuilt->size() != entries_.size()) {
            throw FormatError("knowledge index does not match the knowledge base");
        }
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (prebuilt->records()[i].id != entries_[i].id) {
                throw FormatError("knowledge index does not match the knowledge base");
            }
        }
        index_ = std::move(*prebuilt);
    } else {
        index_ = build_index(entries_, *embedder_);
    }
}

std::vector<KnowledgeEntry> KnowledgeBase::load_entries(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw FormatError("knowledge base file not found: " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("knowledge base " + file.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw FormatError("knowledge base must be a JSON array of entries");
    std::vector<KnowledgeEntry> entries;
    entries.reserve(doc.size());
    for (const auto& item : doc) entries.push_back(KnowledgeEntry::from_json(item));
    return entries;
}

std::string KnowledgeBase::embedding_text(const KnowledgeEntry& entry) {
    return entry.text.value_or(descriptor_for(entry.meta));
}

VectorIndex KnowledgeBase::build_index(const std::vector<KnowledgeEntry>& entries, Embedder& embedder) {
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (const auto& e : entries) {
        ids.push_back(e.id);
        texts.push_back(embedding_text(e));
    }
    return VectorIndex::build(std::move(ids), texts, embedder);
}

const KnowledgeEntry* KnowledgeBase::find_id(std::string_view id) const {
    for (const auto& e : entries_) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

const KnowledgeEntry* KnowledgeBase::find_exact(const AssetMetadata& meta) const {
    for (const auto& e : entries_) {
        if (e.meta == meta) return &e;
    }
    return nullptr;
}

std::optional<AssetMetadata> KnowledgeBase::default_probe(std::string_view crop) const {
    const auto* info = taxonomy_.find_crop(crop);
    if (info == nullptr) return std::nullopt;
    return AssetMetadata{info->category, info->name, info->varieties.front(), Lifecycle::Maturation,
                         Season::Summer, Health::Healthy};
}

const KnowledgeEntry* KnowledgeBase::crop_default(std::string_view crop) const {
    if (auto probe = default_probe(crop)) {
        if (const auto* e = find_exact(*probe)) return e;
    }
    for (const auto& e : entries_) {
        if (text::iequals(e.meta.crop, crop)) return &e;
    }
    return nullptr;
}

std::string_view to_string(KbMode mode) { return mode == KbMode::Hybrid ? "hybrid" : "rag"; }

std::string_view to_string(Resolution r) {
    switch (r) {
        case Resolution::Semantic: return "semantic";
        case Resolution::ExactLookup: return "exact_lookup";
        case Resolution::CropDefault: return "crop_default";
    }
    return "?";
}

nlohmann::json SceneRecipe::to_json() const {
    nlohmann::json j;
    j["lines"] = nlohmann::json::array();
    for (const auto& l : lines) {
        j["lines"].push_back({{"path", l.path.str()},
                              {"entry", l.entry.to_json()},
                              {"quantity", l.quantity},
                              {"rows", l.rows},
                              {"cols", l.cols},
                              {"resolution", sceneforge::to_string(l.resolution)},
                              {"rank", l.rank},
                              {"matched", l.matched}});
    }
    j["fallbacks"] = nlohmann::json::array();
    for (const auto& p : fallbacks) j["fallbacks"].push_back(p.str());
    j["warnings"] = warnings;
    return j;
}

SceneRecipe SceneRecipe::from_json(const nlohmann::json& j) {
    SceneRecipe r;
    try {
        for (const auto& l : j.at("lines")) {
            RecipeLine line;
            line.path = AssetPath(l.at("path").get<std::string>());
            line.entry = KnowledgeEntry::from_json(l.at("entry"));
            line.quantity = l.value("quantity", 1);
            line.rows = l.value("rows", 10);
            line.cols = l.value("cols", 10);
            const auto res = l.value("resolution", std::string("semantic"));
            line.resolution = res == "exact_lookup"   ? Resolution::ExactLookup
                              : res == "crop_default" ? Resolution::CropDefault
                                                      : Resolution::Semantic;
            line.rank = l.value("rank", std::size_t{0});
            line.matched = l.value("matched", true);
            r.lines.push_back(std::move(line));
        }
        for (const auto& p : j.value("fallbacks", nlohmann::json::array())) {
            r.fallbacks.emplace_back(p.get<std::string>());
        }
        r.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("scene recipe: ") + e.what());
    }
    return r;
}

void FallbackLog::record(nlohmann::json event) {
    std::lock_guard lock(mutex_);
    events_.push_back(std::move(event));
}

std::vector<nlohmann::json> FallbackLog::events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

void FallbackLog::write_jsonl(const std::filesystem::path& file) const {
    std::lock_guard lock(mutex_);
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw ConfigError("cannot write fallback log " + file.string());
    for (const auto& e : events_) out << e.dump() << '\n';
}

std::vector<SearchHit> knowledge_candidates(const AssetPath& path, const KnowledgeBase& kb,
                                            const TaxonomyConfig& taxonomy, std::size_t k,
                                            KbMode mode) {
    const std::string query_text =
        mode == KbMode::Rag ? path.str() : descriptor_for(parse_path(path, taxonomy));
    return kb.index().search(kb.embedder().embed_one(query_text), k);
}

SceneRecipe retrieve_entries(const std::vector<AssetPath>& paths, const KnowledgeBase& kb,
                             const TaxonomyConfig& taxonomy, const EnrichOptions& options,
                             FallbackLog* log) {
    if (kb.size() == 0) throw EmptyKnowledgeBaseError("knowledge base has no entries");
    if (options.k == 0) throw ConfigError("knowledge retrieval: k must be at least 1");
    SceneRecipe recipe;
    for (const auto& path : paths) {
        recipe.lines.push_back(resolve_one(path, kb, taxonomy, options, log, recipe));
    }
    return recipe;
}

SceneRecipe enrich(const RetrievalResult& retrieval, const KnowledgeBase& kb,
                   const TaxonomyConfig& taxonomy, const EnrichOptions& options, FallbackLog* log) {
    if (kb.size() == 0) throw EmptyKnowledgeBaseError("knowledge base has no entries");
    SceneRecipe recipe;
    std::set<AssetPath> fell_back;
    for (const auto& sel : retrieval.selections) {
        const auto before = recipe.fallbacks.size();
        auto line = resolve_one(sel.path, kb, taxonomy, options, log, recipe);
        // One fallback record per unique path.
        if (recipe.fallbacks.size() > before && !fell_back.insert(sel.path).second) {
            recipe.fallbacks.pop_back();
        }
        line.quantity = sel.quantity;
        recipe.lines.push_back(std::move(line));
    }
    return recipe;
}

}  // namespace sceneforge
