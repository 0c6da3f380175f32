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

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/embed_index.hpp"
#include "sceneforge/frontend.hpp"
#include "sceneforge/taxonomy.hpp"

namespace sceneforge {

class ChatProvider;

inline constexpr std::size_t kDefaultPathK = 5;

/// How one subquery was resolved.
struct PathSelection {
    std::size_t subquery_index = 0;
    AssetPath path;
    double score = 0.0;
    int quantity = 1;
    /// The subquery after defaults (and any consistency rewrite).
    SubQuery request;
    bool season_explicit = false;
    /// Set when a category-only subquery was expanded to a concrete crop.
    bool expanded = false;
};

struct RetrievalResult {
    /// Unique paths in order of first selection.
    std::vector<AssetPath> paths;
    std::vector<PathSelection> selections;
    std::vector<std::string> warnings;
    std::size_t k = kDefaultPathK;

    nlohmann::json to_json() const;
    static RetrievalResult from_json(const nlohmann::json& j);
};

/// Hybrid asset-path retrieval: defaults, semantic search over the path
/// index, then an exact-field filter on the candidates.
class PathRetriever {
public:
    PathRetriever(TaxonomyConfig taxonomy, std::shared_ptr<Embedder> embedder, VectorIndex index);

    /// Index over every taxonomy path, keyed by path string.
    static VectorIndex build_index(const TaxonomyConfig& taxonomy, Embedder& embedder);
    /// "<Category> <Crop> <Variety words> <Lifecycle> <Season> <Health>".
    static std::string descriptor_text(const AssetMetadata& meta);

    /// Throws NoMatchError when no top-k candidate passes the exact-field
    /// filter even after one retry at 2k. A provider, when given, may only
    /// reject candidates.
    RetrievalResult retrieve_paths(const std::vector<SubQuery>& subqueries,
                                   std::size_t k = kDefaultPathK,
                                   ChatProvider* validator = nullptr) const;

    /// Propagates a single explicitly requested season to fields whose season
    /// was defaulted; warns when explicit seasons disagree.
    RetrievalResult validate_consistency(RetrievalResult result) const;

    const TaxonomyConfig& taxonomy() const noexcept { return taxonomy_; }
    const VectorIndex& index() const noexcept { return index_; }

private:
    PathSelection select(const SubQuery& original, std::size_t subquery_index, std::size_t k,
                         ChatProvider* validator, std::vector<std::string>& warnings) const;

    TaxonomyConfig taxonomy_;
    std::shared_ptr<Embedder> embedder_;
    VectorIndex index_;
};

/// True when every populated field of `q` equals the field in `meta`.
bool matches_fields(const SubQuery& q, const AssetMetadata& meta);

}  // namespace sceneforge
