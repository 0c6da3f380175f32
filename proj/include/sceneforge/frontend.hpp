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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/taxonomy.hpp"

namespace sceneforge {

class ChatProvider;
struct ChatMessage;

enum class FieldClass { Category, Crop, Variety, Lifecycle, Season, Health };

std::string_view to_string(FieldClass c);

/// Structured partial description of one requested field.
struct SubQuery {
    std::optional<Category> category;
    std::optional<std::string> crop;
    std::optional<std::string> variety;
    std::optional<Lifecycle> lifecycle;
    std::optional<Season> season;
    std::optional<Health> health;
    std::optional<int> quantity;
    /// Contiguous fragment of the prompt this subquery came from.
    std::string residual_text;

    friend bool operator==(const SubQuery&, const SubQuery&) = default;
};

nlohmann::json to_json(const SubQuery& q);
SubQuery subquery_from_json(const nlohmann::json& j);

/// Synonym -> canonical identifier per field class, plus structural words
/// the rule engine skips. Keys are stored lowercased.
class NormalizationTable {
public:
    NormalizationTable() = default;

    /// Throws ConfigError if a canonical value is not in the taxonomy.
    static NormalizationTable from_json(const nlohmann::json& doc, const TaxonomyConfig& taxonomy);
    static NormalizationTable load(const std::filesystem::path& file, const TaxonomyConfig& taxonomy);

    const std::map<std::string, std::string>& synonyms(FieldClass c) const;
    const std::vector<std::string>& ignored() const noexcept { return ignored_; }
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    std::map<FieldClass, std::map<std::string, std::string>> tables_;
    std::vector<std::string> ignored_;
    std::uint64_t fingerprint_ = 0;
};

enum class FrontendMode { Rules, Provider };

struct Decomposition {
    std::vector<SubQuery> subqueries;
    std::vector<std::string> warnings;
    /// True when provider mode fell back to the rule engine.
    bool fell_back = false;
};

/// Prompt decomposition and vocabulary normalization over immutable tables.
class Frontend {
public:
    Frontend(const TaxonomyConfig& taxonomy, NormalizationTable table);

    /// Throws EmptyPromptError. In provider mode any provider failure or
    /// invalid reply falls back to the rule engine with a warning.
    Decomposition decompose(std::string_view prompt, FrontendMode mode = FrontendMode::Rules,
                            ChatProvider* provider = nullptr) const;

    std::vector<SubQuery> decompose_rules(std::string_view prompt) const;

    /// Case-insensitive canonicalization; throws UnknownTermError.
    std::string normalize_term(std::string_view raw, FieldClass field_class) const;

    /// Messages sent to the chat provider for `prompt`.
    std::vector<ChatMessage> provider_messages(std::string_view prompt) const;
    /// Serializes subqueries in the reply format expected from the provider.
    static std::string provider_reply(const std::vector<SubQuery>& subqueries);
    /// Parses and validates a provider reply; throws MalformedResponseError.
    std::vector<SubQuery> parse_provider_reply(std::string_view reply, std::string_view prompt) const;

    const TaxonomyConfig& taxonomy() const noexcept { return taxonomy_; }
    const NormalizationTable& table() const noexcept { return table_; }

private:
    struct Sense {
        FieldClass cls;
        std::string value;
        std::string crop;  // owning crop for Variety senses
    };
    struct Phrase {
        std::vector<std::string> tokens;
        std::vector<Sense> senses;
    };

    void add_phrase(std::string_view phrase, Sense sense);

    TaxonomyConfig taxonomy_;
    NormalizationTable table_;
    // First token -> phrases starting with it, longest first.
    std::map<std::string, std::vector<Phrase>> lexicon_;
    std::vector<std::string> ignored_;
};

/// Fills unpopulated fields when a crop is known: category from the crop,
/// variety = first configured variety, lifecycle Maturation, season
/// Summer, health Healthy, quantity 1. Without a crop the subquery is
/// returned unchanged.
SubQuery apply_defaults(const SubQuery& q, const TaxonomyConfig& taxonomy);

}  // namespace sceneforge
