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

#include "sceneforge/retrieval.hpp"

#include <algorithm>
#include <set>

#include "sceneforge/errors.hpp"
#include "sceneforge/providers.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

std::vector<AssetPath> unique_paths(const std::vector<PathSelection>& selections) {
    std::vector<AssetPath> out;
    for (const auto& s : selections) {
        if (std::find(out.begin(), out.end(), s.path) == out.end()) out.push_back(s.path);
    }
    return out;
}

bool provider_rejects(ChatProvider& provider, const SubQuery& q, const AssetPath& path,
                      std::vector<std::string>& warnings) {
    const std::vector<ChatMessage> messages{
        {"system",
         "You check asset paths for an agricultural scene generator. Answer 'yes' if the asset "
         "path matches the request in variety, lifecycle, season and health, otherwise 'no'."},
        {"user", "Request: " + q.residual_text + "\nAsset path: " + path.str()},
    };
    try {
        const auto reply = text::to_lower(text::trim(provider.chat(messages)));
        return reply.starts_with("no");
    } catch (const ProviderError& e) {
        warnings.push_back(std::string("retrieval: validation provider failed (") + e.kind() +
                           "); accepting " + path.str());
        return false;
    }
}

}  // namespace

bool matches_fields(const SubQuery& q, const AssetMetadata& meta) {
    return (!q.category || *q.category == meta.category) &&
           (!q.crop || text::iequals(*q.crop, meta.crop)) &&
           (!q.variety || text::iequals(*q.variety, meta.variety)) &&
           (!q.lifecycle || *q.lifecycle == meta.lifecycle) && (!q.season || *q.season == meta.season) &&
           (!q.health || *q.health == meta.health);
}

nlohmann::json RetrievalResult::to_json() const {
    nlohmann::json j;
    j["paths"] = nlohmann::json::array();
    for (const auto& p : paths) j["paths"].push_back(p.str());
    j["selections"] = nlohmann::json::array();
    for (const auto& s : selections) {
        j["selections"].push_back({{"subquery_index", s.subquery_index},
                                   {"path", s.path.str()},
                                   {"score", s.score},
                                   {"quantity", s.quantity},
                                   {"request", sceneforge::to_json(s.request)},
                                   {"season_explicit", s.season_explicit},
                                   {"expanded", s.expanded}});
    }
    j["warnings"] = warnings;
    j["k"] = k;
    return j;
}

RetrievalResult RetrievalResult::from_json(const nlohmann::json& j) {
    RetrievalResult r;
    try {
        for (const auto& s : j.at("selections")) {
            PathSelection sel;
            sel.subquery_index = s.at("subquery_index").get<std::size_t>();
            sel.path = AssetPath(s.at("path").get<std::string>());
            sel.score = s.value("score", 0.0);
            sel.quantity = s.value("quantity", 1);
            sel.request = subquery_from_json(s.at("request"));
            sel.season_explicit = s.value("season_explicit", false);
            sel.expanded = s.value("expanded", false);
            r.selections.push_back(std::move(sel));
        }
        r.warnings = j.value("warnings", std::vector<std::string>{});
        r.k = j.value("k", kDefaultPathK);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("retrieval result: ") + e.what());
    }
    r.paths = unique_paths(r.selections);
    return r;
}

PathRetriever::PathRetriever(TaxonomyConfig taxonomy, std::shared_ptr<Embedder> embedder,
                             VectorIndex index)
    : taxonomy_(std::move(taxonomy)), embedder_(std::move(embedder)), index_(std::move(index)) {
    if (index_.empty()) throw IndexMissingError("asset path index is empty");
}

std::string PathRetriever::descriptor_text(const AssetMetadata& meta) {
    return std::string(to_string(meta.category)) + " " + meta.crop + " " +
           text::split_pascal(meta.variety) + " " + std::string(to_string(meta.lifecycle)) + " " +
           std::string(to_string(meta.season)) + " " + std::string(to_string(meta.health));
}

VectorIndex PathRetriever::build_index(const TaxonomyConfig& taxonomy, Embedder& embedder) {
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (const auto& path : enumerate_paths(taxonomy)) {
        texts.push_back(descriptor_text(parse_path(path, taxonomy)));
        ids.push_back(path.str());
    }
    return VectorIndex::build(std::move(ids), texts, embedder);
}

PathSelection PathRetriever::select(const SubQuery& original, std::size_t subquery_index,
                                    std::size_t k, ChatProvider* validator,
                                    std::vector<std::string>& warnings) const {
    SubQuery q = original;
    bool expanded = false;
    if (!q.crop) {
        if (!q.category) {
            throw NoMatchError("subquery " + std::to_string(subquery_index) + " ('" +
                               original.residual_text + "') names no known crop");
        }
        const auto crops = taxonomy_.crops_in(*q.category);
        if (crops.empty()) {
            throw NoMatchError("category " + std::string(to_string(*q.category)) + " has no crops");
        }
        q.crop = crops.front()->name;
        expanded = true;
        warnings.push_back("retrieval: expanded category " + std::string(to_string(*q.category)) +
                           " to crop " + *q.crop);
    }
    const auto* crop = taxonomy_.find_crop(*q.crop);
    if (crop == nullptr) {
        throw NoMatchError("subquery " + std::to_string(subquery_index) + " names unknown crop '" + *q.crop + "'");
    }
    q = apply_defaults(q, taxonomy_);

    // An unknown variety still renders a query; the filter rejects every hit.
    AssetMetadata probe{crop->category, crop->name, *q.variety, *q.lifecycle, *q.season, *q.health};
    const auto query = embedder_->embed_one(descriptor_text(probe));

    for (std::size_t attempt = 0, kk = k; attempt < 2; ++attempt, kk *= 2) {
        for (const auto& hit : index_.search(query, kk)) {
            AssetMetadata meta;
            try {
                meta = parse_path(hit.id, taxonomy_);
            } catch (const Error&) {
                continue;
            }
            if (!matches_fields(q, meta)) continue;
            if (validator != nullptr && provider_rejects(*validator, q, AssetPath(hit.id), warnings)) {
                continue;
            }
            PathSelection sel;
            sel.subquery_index = subquery_index;
            sel.path = AssetPath(hit.id);
            sel.score = hit.score;
            sel.quantity = q.quantity.value_or(1);
            sel.request = q;
            sel.season_explicit = original.season.has_value();
            sel.expanded = expanded;
            return sel;
        }
    }
    throw NoMatchError("no asset path in the top " + std::to_string(2 * k) +
                       " candidates matches subquery " + std::to_string(subquery_index) + " ('" +
                       original.residual_text + "')");
}

RetrievalResult PathRetriever::retrieve_paths(const std::vector<SubQuery>& subqueries, std::size_t k,
                                              ChatProvider* validator) const {
    if (subqueries.empty()) throw NoMatchError("no subqueries to retrieve");
    if (k == 0) throw ConfigError("retrieval: k must be at least 1");
    RetrievalResult result;
    result.k = k;
    for (std::size_t i = 0; i < subqueries.size(); ++i) {
        result.selections.push_back(select(subqueries[i], i, k, validator, result.warnings));
    }
    result.paths = unique_paths(result.selections);
    return result;
}

RetrievalResult PathRetriever::validate_consistency(RetrievalResult result) const {
    std::set<Season> explicit_seasons;
    for (const auto& s : result.selections) {
        if (s.season_explicit && s.request.season) explicit_seasons.insert(*s.request.season);
    }
    if (explicit_seasons.size() > 1) {
        result.warnings.push_back("consistency: fields request different seasons; kept as requested");
        return result;
    }
    if (explicit_seasons.empty()) return result;

    const Season season = *explicit_seasons.begin();
    for (auto& s : result.selections) {
        if (s.season_explicit || s.request.season == season) continue;
        SubQuery rewritten = s.request;
        rewritten.season = season;
        std::vector<std::string> warnings;
        auto replacement = select(rewritten, s.subquery_index, result.k, nullptr, warnings);
        replacement.season_explicit = false;
        replacement.expanded = s.expanded;
        result.warnings.push_back("consistency: field " + std::to_string(s.subquery_index) +
                                  " season set to " + std::string(to_string(season)) +
                                  " to match the requested season");
        s = std::move(replacement);
    }
    result.paths = unique_paths(result.selections);
    return result;
}

}  // namespace sceneforge
