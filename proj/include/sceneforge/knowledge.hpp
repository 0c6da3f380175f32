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

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/embed_index.hpp"
#include "sceneforge/taxonomy.hpp"

namespace sceneforge {

struct RetrievalResult;

enum class Susceptibility { Low, Medium, High };
enum class Irrigation { Drip, Sprinkler, Rainfed };

/// Agronomic record for one taxonomy tuple. Lengths in meters, density in
/// plants per hectare.
struct KnowledgeEntry {
    std::string id;
    AssetMetadata meta;
    double plant_height_m = 0.0;
    double row_spacing_m = 0.0;
    double plant_spacing_m = 0.0;
    double density_per_ha = 0.0;
    Susceptibility disease_susceptibility = Susceptibility::Low;
    Irrigation irrigation = Irrigation::Drip;
    std::vector<std::string> rendering_effects;
    /// Free text indexed for this entry; descriptor_for(meta) when absent.
    std::optional<std::string> text;

    /// Positive measurements and density within 10% of
    /// 10000 / (row_spacing * plant_spacing). Throws FormatError.
    void validate() const;

    nlohmann::json to_json() const;
    static KnowledgeEntry from_json(const nlohmann::json& j);

    friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

/// "<health> <lifecycle> <Variety words> <crop> in <season>", e.g.
/// "healthy young Pink Lady apple in fall".
std::string descriptor_for(const AssetMetadata& meta);

/// Lowercased alphanumerics equal, or Levenshtein distance <= 1.
bool varieties_match(std::string_view a, std::string_view b);

/// Exact (case-insensitive) category, crop, lifecycle, season and health,
/// fuzzy variety.
bool strict_match(const KnowledgeEntry& entry, const AssetMetadata& meta);

/// Immutable entry store with its embedding index.
class KnowledgeBase {
public:
    /// Validates every entry (FormatError) and that ids are unique; metas
    /// must be valid under `taxonomy` (UnknownTaxonError). Builds the index
    /// with `embedder` unless `prebuilt` is given.
    KnowledgeBase(const TaxonomyConfig& taxonomy, std::vector<KnowledgeEntry> entries,
                  std::shared_ptr<Embedder> embedder, std::optional<VectorIndex> prebuilt = std::nullopt);

    /// JSON array of entries. Missing or unparsable file -> FormatError.
    static std::vector<KnowledgeEntry> load_entries(const std::filesystem::path& file);
    static VectorIndex build_index(const std::vector<KnowledgeEntry>& entries, Embedder& embedder);
    static std::string embedding_text(const KnowledgeEntry& entry);

    const std::vector<KnowledgeEntry>& entries() const noexcept { return entries_; }
    const VectorIndex& index() const noexcept { return index_; }
    Embedder& embedder() const { return *embedder_; }
    std::size_t size() const noexcept { return entries_.size(); }

    const KnowledgeEntry* find_id(std::string_view id) const;
    /// Entry whose meta equals `meta` exactly, if any.
    const KnowledgeEntry* find_exact(const AssetMetadata& meta) const;
    /// The crop's default tuple (first variety, Maturation, Summer,
    /// Healthy), else the first entry of that crop.
    const KnowledgeEntry* crop_default(std::string_view crop) const;

private:
    std::vector<KnowledgeEntry> entries_;
    std::shared_ptr<Embedder> embedder_;
    VectorIndex index_;
    std::optional<AssetMetadata> default_probe(std::string_view crop) const;
    TaxonomyConfig taxonomy_;
};

/// hybrid: descriptor query, top-k, strict post-filter.
/// rag: raw path text query, top-1, no filter.
enum class KbMode { Hybrid, Rag };

std::string_view to_string(KbMode mode);

enum class Resolution { Semantic, ExactLookup, CropDefault };

std::string_view to_string(Resolution r);

inline constexpr std::size_t kDefaultKnowledgeK = 3;

struct RecipeLine {
    AssetPath path;
    KnowledgeEntry entry;
    int quantity = 1;
    int rows = 10;
    int cols = 10;
    Resolution resolution = Resolution::Semantic;
    /// 1-based semantic rank of the chosen entry; 0 for fallbacks.
    std::size_t rank = 0;
    /// strict_match(entry, parse_path(path)).
    bool matched = true;
};

struct SceneRecipe {
    std::vector<RecipeLine> lines;
    std::vector<AssetPath> fallbacks;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    static SceneRecipe from_json(const nlohmann::json& j);
};

/// Append-only sink for structured fallback events; writes are serialized.
class FallbackLog {
public:
    void record(nlohmann::json event);
    std::vector<nlohmann::json> events() const;
    /// Writes one JSON object per line.
    void write_jsonl(const std::filesystem::path& file) const;

private:
    mutable std::mutex mutex_;
    std::vector<nlohmann::json> events_;
};

struct EnrichOptions {
    std::size_t k = kDefaultKnowledgeK;
    KbMode mode = KbMode::Hybrid;
    int rows = 10;
    int cols = 10;
};

/// Semantic candidates for `path` in pre-filter rank order.
std::vector<SearchHit> knowledge_candidates(const AssetPath& path, const KnowledgeBase& kb,
                                            const TaxonomyConfig& taxonomy, std::size_t k,
                                            KbMode mode = KbMode::Hybrid);

/// One recipe line per path (quantity 1, default dimensions). Throws
/// EmptyKnowledgeBaseError; NoMatchError when a fallback finds no entry
/// for the crop.
SceneRecipe retrieve_entries(const std::vector<AssetPath>& paths, const KnowledgeBase& kb,
                             const TaxonomyConfig& taxonomy, const EnrichOptions& options = {},
                             FallbackLog* log = nullptr);

/// One recipe line per retrieval selection, carrying its quantity.
SceneRecipe enrich(const RetrievalResult& retrieval, const KnowledgeBase& kb,
                   const TaxonomyConfig& taxonomy, const EnrichOptions& options = {},
                   FallbackLog* log = nullptr);

}  // namespace sceneforge
