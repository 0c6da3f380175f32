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

#include "sceneforge/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "sceneforge/errors.hpp"
#include "sceneforge/providers.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

constexpr std::array<std::pair<FieldClass, const char*>, 6> kClassKeys{{
    {FieldClass::Category, "category"},
    {FieldClass::Crop, "crop"},
    {FieldClass::Variety, "variety"},
    {FieldClass::Lifecycle, "lifecycle"},
    {FieldClass::Season, "season"},
    {FieldClass::Health, "health"},
}};

const std::map<std::string, int>& number_words() {
    static const std::map<std::string, int> words{
        {"one", 1},   {"two", 2},    {"three", 3},  {"four", 4},     {"five", 5},
        {"six", 6},   {"seven", 7},  {"eight", 8},  {"nine", 9},     {"ten", 10},
        {"eleven", 11}, {"twelve", 12}, {"single", 1}, {"pair", 2},  {"couple", 2},
    };
    return words;
}

// Word-level conjunctions that separate field descriptions.
const std::set<std::string>& conjunctions() {
    static const std::set<std::string> words{"and", "plus", "alongside", "beside", "besides"};
    return words;
}

struct Token {
    std::string text;  // lowercased
    std::size_t begin = 0;
    std::size_t end = 0;
    bool separator = false;
};

std::vector<Token> tokenize(std::string_view prompt) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < prompt.size()) {
        const auto c = static_cast<unsigned char>(prompt[i]);
        if (std::isalnum(c)) {
            std::size_t j = i;
            while (j < prompt.size() && std::isalnum(static_cast<unsigned char>(prompt[j]))) ++j;
            tokens.push_back({text::to_lower(prompt.substr(i, j - i)), i, j, false});
            i = j;
        } else {
            if (c == ',' || c == ';' || c == '&' || c == '.' || c == '\n') {
                tokens.push_back({std::string(1, static_cast<char>(c)), i, i + 1, true});
            }
            ++i;
        }
    }
    return tokens;
}

std::vector<std::string> phrase_tokens(std::string_view phrase) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(phrase)) {
        if (!t.separator) out.push_back(t.text);
    }
    return out;
}

std::optional<int> parse_quantity(const std::string& word) {
    if (auto it = number_words().find(word); it != number_words().end()) return it->second;
    if (!word.empty() && word.size() <= 4 &&
        std::all_of(word.begin(), word.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
        const int n = std::stoi(word);
        if (n > 0) return n;
    }
    return std::nullopt;
}

std::string crop_plural(const std::string& lower, int form) {
    switch (form) {
        case 0: return lower + "s";
        case 1: return lower + "es";
        default:
            if (!lower.empty() && lower.back() == 'y') return lower.substr(0, lower.size() - 1) + "ies";
            return {};
    }
}

template <typename Enum>
std::optional<std::string> canonical_enum(std::string_view raw, std::optional<Enum> parsed) {
    (void)raw;
    if (!parsed) return std::nullopt;
    return std::string(to_string(*parsed));
}

}  // namespace

std::string_view to_string(FieldClass c) {
    for (const auto& [cls, key] : kClassKeys) {
        if (cls == c) return key;
    }
    return "?";
}

nlohmann::json to_json(const SubQuery& q) {
    nlohmann::json j = nlohmann::json::object();
    if (q.category) j["category"] = to_string(*q.category);
    if (q.crop) j["crop"] = *q.crop;
    if (q.variety) j["variety"] = *q.variety;
    if (q.lifecycle) j["lifecycle"] = to_string(*q.lifecycle);
    if (q.season) j["season"] = to_string(*q.season);
    if (q.health) j["health"] = to_string(*q.health);
    if (q.quantity) j["quantity"] = *q.quantity;
    j["text"] = q.residual_text;
    return j;
}

SubQuery subquery_from_json(const nlohmann::json& j) {
    SubQuery q;
    auto parse_enum = [&](const char* key, auto parser) -> decltype(parser(std::string_view{})) {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        const auto value = j.at(key).get<std::string>();
        auto parsed = parser(value);
        if (!parsed) throw FormatError(std::string("subquery: bad ") + key + " '" + value + "'");
        return parsed;
    };
    try {
        q.category = parse_enum("category", category_from_string);
        q.lifecycle = parse_enum("lifecycle", lifecycle_from_string);
        q.season = parse_enum("season", season_from_string);
        q.health = parse_enum("health", health_from_string);
        if (j.contains("crop") && !j.at("crop").is_null()) q.crop = j.at("crop").get<std::string>();
        if (j.contains("variety") && !j.at("variety").is_null()) {
            q.variety = j.at("variety").get<std::string>();
        }
        if (j.contains("quantity") && !j.at("quantity").is_null()) q.quantity = j.at("quantity").get<int>();
        q.residual_text = j.value("text", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("subquery: ") + e.what());
    }
    return q;
}

NormalizationTable NormalizationTable::from_json(const nlohmann::json& doc,
                                                 const TaxonomyConfig& taxonomy) {
    NormalizationTable table;
    if (!doc.is_object()) throw ConfigError("synonyms: document must be an object");
    try {
        for (const auto& [cls, key] : kClassKeys) {
            auto& out = table.tables_[cls];
            if (!doc.contains(key)) continue;
            for (const auto& [raw, canonical_json] : doc.at(key).items()) {
                const auto canonical = canonical_json.get<std::string>();
                bool ok = false;
                switch (cls) {
                    case FieldClass::Category: ok = category_from_string(canonical).has_value(); break;
                    case FieldClass::Lifecycle:
                        ok = lifecycle_from_string(canonical) && taxonomy.has(*lifecycle_from_string(canonical));
                        break;
                    case FieldClass::Season:
                        ok = season_from_string(canonical) && taxonomy.has(*season_from_string(canonical));
                        break;
                    case FieldClass::Health:
                        ok = health_from_string(canonical) && taxonomy.has(*health_from_string(canonical));
                        break;
                    case FieldClass::Crop: ok = taxonomy.find_crop(canonical) != nullptr; break;
                    case FieldClass::Variety: {
                        // "Variety" or "Crop/Variety".
                        const auto slash = canonical.find('/');
                        if (slash != std::string::npos) {
                            ok = taxonomy.find_variety(canonical.substr(0, slash), canonical.substr(slash + 1))
                                     .has_value();
                        } else {
                            for (const auto& crop : taxonomy.crops()) {
                                ok = ok || taxonomy.find_variety(crop.name, canonical).has_value();
                            }
                        }
                        break;
                    }
                }
                if (!ok) {
                    throw ConfigError("synonyms: '" + raw + "' maps to unknown " + key + " '" +
                                      canonical + "'");
                }
                out[text::to_lower(text::trim(raw))] = canonical;
            }
        }
        if (doc.contains("ignore")) {
            for (const auto& w : doc.at("ignore")) table.ignored_.push_back(text::to_lower(w.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("synonyms: ") + e.what());
    }
    table.fingerprint_ = text::fnv1a64(doc.dump());
    return table;
}

NormalizationTable NormalizationTable::load(const std::filesystem::path& file,
                                            const TaxonomyConfig& taxonomy) {
    std::ifstream in(file);
    if (!in) throw ConfigError("synonyms: cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("synonyms: " + file.string() + ": " + e.what());
    }
    return from_json(doc, taxonomy);
}

const std::map<std::string, std::string>& NormalizationTable::synonyms(FieldClass c) const {
    static const std::map<std::string, std::string> empty;
    auto it = tables_.find(c);
    return it == tables_.end() ? empty : it->second;
}

Frontend::Frontend(const TaxonomyConfig& taxonomy, NormalizationTable table)
    : taxonomy_(taxonomy), table_(std::move(table)) {
    for (Category c : taxonomy_.categories()) {
        add_phrase(text::to_lower(to_string(c)), {FieldClass::Category, std::string(to_string(c)), {}});
    }
    for (auto v : taxonomy_.lifecycles()) {
        add_phrase(text::to_lower(to_string(v)), {FieldClass::Lifecycle, std::string(to_string(v)), {}});
    }
    for (auto v : taxonomy_.seasons()) {
        add_phrase(text::to_lower(to_string(v)), {FieldClass::Season, std::string(to_string(v)), {}});
    }
    for (auto v : taxonomy_.healths()) {
        add_phrase(text::to_lower(to_string(v)), {FieldClass::Health, std::string(to_string(v)), {}});
    }
    for (const auto& crop : taxonomy_.crops()) {
        const auto lower = text::to_lower(crop.name);
        add_phrase(lower, {FieldClass::Crop, crop.name, {}});
        for (int form = 0; form < 3; ++form) {
            if (auto plural = crop_plural(lower, form); !plural.empty()) {
                add_phrase(plural, {FieldClass::Crop, crop.name, {}});
            }
        }
        for (const auto& variety : crop.varieties) {
            add_phrase(text::to_lower(variety), {FieldClass::Variety, variety, crop.name});
            add_phrase(text::to_lower(text::split_pascal(variety)), {FieldClass::Variety, variety, crop.name});
        }
    }
    for (const auto& [cls, key] : kClassKeys) {
        for (const auto& [raw, canonical] : table_.synonyms(cls)) {
            if (cls == FieldClass::Variety) {
                const auto slash = canonical.find('/');
                if (slash != std::string::npos) {
                    const auto crop = taxonomy_.find_crop(canonical.substr(0, slash))->name;
                    add_phrase(raw, {cls, *taxonomy_.find_variety(crop, canonical.substr(slash + 1)), crop});
                } else {
                    for (const auto& crop : taxonomy_.crops()) {
                        if (auto v = taxonomy_.find_variety(crop.name, canonical)) add_phrase(raw, {cls, *v, crop.name});
                    }
                }
            } else if (cls == FieldClass::Crop) {
                add_phrase(raw, {cls, taxonomy_.find_crop(canonical)->name, {}});
            } else {
                add_phrase(raw, {cls, normalize_term(canonical, cls), {}});
            }
        }
    }
    ignored_ = table_.ignored();
}

void Frontend::add_phrase(std::string_view phrase, Sense sense) {
    auto tokens = phrase_tokens(phrase);
    if (tokens.empty()) return;
    auto& bucket = lexicon_[tokens.front()];
    auto it = std::find_if(bucket.begin(), bucket.end(), [&](const Phrase& p) { return p.tokens == tokens; });
    if (it == bucket.end()) {
        bucket.push_back({tokens, {}});
        it = std::prev(bucket.end());
    }
    const bool dup = std::any_of(it->senses.begin(), it->senses.end(), [&](const Sense& s) {
        return s.cls == sense.cls && s.value == sense.value && s.crop == sense.crop;
    });
    if (!dup) it->senses.push_back(std::move(sense));
    std::stable_sort(bucket.begin(), bucket.end(),
                     [](const Phrase& a, const Phrase& b) { return a.tokens.size() > b.tokens.size(); });
}

std::string Frontend::normalize_term(std::string_view raw, FieldClass field_class) const {
    const auto key = text::to_lower(text::trim(raw));
    const auto& synonyms = table_.synonyms(field_class);
    std::optional<std::string> found;
    switch (field_class) {
        case FieldClass::Category: found = canonical_enum(key, category_from_string(key)); break;
        case FieldClass::Lifecycle:
            if (auto v = lifecycle_from_string(key); v && taxonomy_.has(*v)) found = std::string(to_string(*v));
            break;
        case FieldClass::Season:
            if (auto v = season_from_string(key); v && taxonomy_.has(*v)) found = std::string(to_string(*v));
            break;
        case FieldClass::Health:
            if (auto v = health_from_string(key); v && taxonomy_.has(*v)) found = std::string(to_string(*v));
            break;
        case FieldClass::Crop:
            if (const auto* crop = taxonomy_.find_crop(key)) found = crop->name;
            break;
        case FieldClass::Variety:
            for (const auto& crop : taxonomy_.crops()) {
                for (const auto& v : crop.varieties) {
                    if (!found && (text::iequals(v, key) ||
                                   text::normalize_alnum(v) == text::normalize_alnum(key))) {
                        found = v;
                    }
                }
            }
            break;
    }
    if (found) return *found;
    if (auto it = synonyms.find(key); it != synonyms.end()) {
        const auto& canonical = it->second;
        if (field_class == FieldClass::Variety) {
            const auto slash = canonical.find('/');
            return slash == std::string::npos ? normalize_term(canonical, field_class)
                                              : *taxonomy_.find_variety(canonical.substr(0, slash),
                                                                         canonical.substr(slash + 1));
        }
        return normalize_term(canonical, field_class);
    }
    throw UnknownTermError("unknown " + std::string(to_string(field_class)) + " term '" +
                           std::string(raw) + "'");
}

std::vector<SubQuery> Frontend::decompose_rules(std::string_view prompt) const {
    struct Match {
        const std::vector<Sense>* senses = nullptr;
        std::optional<int> quantity;
        std::size_t begin = 0;
    };
    struct Segment {
        std::size_t begin = std::string_view::npos;
        std::size_t end = 0;
        std::vector<Match> matches;
        bool anchored = false;
    };

    const auto tokens = tokenize(prompt);
    std::vector<Segment> segments(1);
    auto touch = [&](const Token& t) {
        auto& seg = segments.back();
        seg.begin = std::min(seg.begin, t.begin);
        seg.end = std::max(seg.end, t.end);
    };
    auto cut = [&] {
        if (!segments.back().matches.empty() || segments.back().begin != std::string_view::npos) {
            segments.emplace_back();
        }
    };

    for (std::size_t i = 0; i < tokens.size();) {
        const auto& tok = tokens[i];
        if (tok.separator || conjunctions().contains(tok.text)) {
            cut();
            ++i;
            continue;
        }
        if (tok.text == "as" && i + 2 < tokens.size() && tokens[i + 1].text == "well" &&
            tokens[i + 2].text == "as") {
            cut();
            i += 3;
            continue;
        }
        if (tok.text == "next" && i + 1 < tokens.size() && tokens[i + 1].text == "to") {
            cut();
            i += 2;
            continue;
        }
        touch(tok);
        const Phrase* best = nullptr;
        if (auto it = lexicon_.find(tok.text); it != lexicon_.end()) {
            for (const auto& phrase : it->second) {
                if (i + phrase.tokens.size() > tokens.size()) continue;
                bool ok = true;
                for (std::size_t k = 0; k < phrase.tokens.size() && ok; ++k) {
                    ok = !tokens[i + k].separator && tokens[i + k].text == phrase.tokens[k];
                }
                if (ok) {
                    best = &phrase;
                    break;
                }
            }
        }
        if (best != nullptr) {
            touch(tokens[i + best->tokens.size() - 1]);
            segments.back().matches.push_back({&best->senses, std::nullopt, tok.begin});
            i += best->tokens.size();
            continue;
        }
        if (auto qty = parse_quantity(tok.text)) {
            segments.back().matches.push_back({nullptr, qty, tok.begin});
        }
        ++i;
    }

    std::erase_if(segments, [](const Segment& s) { return s.begin == std::string_view::npos; });
    for (auto& seg : segments) {
        for (const auto& m : seg.matches) {
            if (m.senses == nullptr) continue;
            for (const auto& s : *m.senses) {
                seg.anchored = seg.anchored || s.cls == FieldClass::Crop || s.cls == FieldClass::Variety ||
                               s.cls == FieldClass::Category;
            }
        }
    }

    // Attribute-only fragments attach to the preceding anchored fragment,
    // or to the following one when they lead the prompt.
    std::vector<Segment> merged;
    std::vector<Segment> pending;
    for (auto& seg : segments) {
        if (!seg.anchored) {
            if (!merged.empty()) {
                auto& last = merged.back();
                last.end = std::max(last.end, seg.end);
                last.matches.insert(last.matches.end(), seg.matches.begin(), seg.matches.end());
            } else {
                pending.push_back(std::move(seg));
            }
            continue;
        }
        for (auto& p : pending) {
            seg.begin = std::min(seg.begin, p.begin);
            seg.matches.insert(seg.matches.begin(), p.matches.begin(), p.matches.end());
        }
        pending.clear();
        merged.push_back(std::move(seg));
    }
    if (merged.empty()) {
        Segment all;
        for (auto& p : pending) {
            all.begin = std::min(all.begin, p.begin);
            all.end = std::max(all.end, p.end);
            all.matches.insert(all.matches.end(), p.matches.begin(), p.matches.end());
        }
        if (all.begin == std::string_view::npos) {
            const auto trimmed = text::trim(prompt);
            all.begin = prompt.find(trimmed);
            all.end = all.begin + trimmed.size();
        }
        merged.push_back(std::move(all));
    }

    std::vector<SubQuery> out;
    for (auto& seg : merged) {
        std::stable_sort(seg.matches.begin(), seg.matches.end(),
                         [](const Match& a, const Match& b) { return a.begin < b.begin; });
        SubQuery shared;
        shared.residual_text = std::string(prompt.substr(seg.begin, seg.end - seg.begin));
        std::vector<std::string> explicit_crops;
        std::vector<Category> categories;
        for (const auto& m : seg.matches) {
            if (m.quantity) {
                if (!shared.quantity) shared.quantity = m.quantity;
                continue;
            }
            for (const auto& s : *m.senses) {
                if (m.senses->size() == 1 && s.cls == FieldClass::Crop &&
                    std::find(explicit_crops.begin(), explicit_crops.end(), s.value) == explicit_crops.end()) {
                    explicit_crops.push_back(s.value);
                }
                if (s.cls == FieldClass::Category) categories.push_back(*category_from_string(s.value));
                if (s.cls == FieldClass::Lifecycle && !shared.lifecycle) shared.lifecycle = lifecycle_from_string(s.value);
                if (s.cls == FieldClass::Season && !shared.season) shared.season = season_from_string(s.value);
                if (s.cls == FieldClass::Health && !shared.health) shared.health = health_from_string(s.value);
            }
        }

        // Resolve crop/variety mentions in order of appearance.
        std::vector<std::pair<std::string, std::optional<std::string>>> crops;
        auto note = [&](const std::string& crop, std::optional<std::string> variety) {
            auto it = std::find_if(crops.begin(), crops.end(), [&](const auto& c) { return c.first == crop; });
            if (it == crops.end()) {
                crops.emplace_back(crop, std::move(variety));
            } else if (!it->second && variety) {
                it->second = std::move(variety);
            }
        };
        for (const auto& m : seg.matches) {
            if (m.senses == nullptr) continue;
            const Sense* crop_sense = nullptr;
            std::vector<const Sense*> variety_senses;
            for (const auto& s : *m.senses) {
                if (s.cls == FieldClass::Crop) crop_sense = &s;
                if (s.cls == FieldClass::Variety) variety_senses.push_back(&s);
            }
            if (variety_senses.empty()) {
                if (crop_sense != nullptr) note(crop_sense->value, std::nullopt);
                continue;
            }
            const Sense* chosen = nullptr;
            for (const auto* v : variety_senses) {
                if (!chosen && std::find(explicit_crops.begin(), explicit_crops.end(), v->crop) != explicit_crops.end()) {
                    chosen = v;
                }
            }
            if (chosen == nullptr && crop_sense != nullptr) {
                // A bare word naming both a crop and a variety of some other
                // crop reads as the crop unless that other crop is mentioned.
                note(crop_sense->value, std::nullopt);
                continue;
            }
            if (chosen == nullptr) chosen = variety_senses.front();
            note(chosen->crop, chosen->value);
        }

        if (!crops.empty()) {
            for (const auto& [crop, variety] : crops) {
                SubQuery q = shared;
                q.crop = crop;
                q.variety = variety;
                q.category = taxonomy_.find_crop(crop)->category;
                out.push_back(std::move(q));
            }
        } else if (!categories.empty()) {
            std::vector<Category> seen;
            for (Category c : categories) {
                if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
                seen.push_back(c);
                SubQuery q = shared;
                q.category = c;
                out.push_back(std::move(q));
            }
        } else {
            out.push_back(std::move(shared));
        }
    }
    return out;
}

std::vector<ChatMessage> Frontend::provider_messages(std::string_view prompt) const {
    std::string system =
        "Split the agricultural scene request into one subquery per requested field. "
        "Reply with JSON only: {\"subqueries\": [{\"category\", \"crop\", \"variety\", "
        "\"lifecycle\", \"season\", \"health\", \"quantity\", \"text\"}]} where \"text\" is the "
        "exact fragment of the request describing the field and unspecified fields are omitted. "
        "Allowed values:\n";
    for (const auto& crop : taxonomy_.crops()) {
        system += std::string(to_string(crop.category)) + "/" + crop.name + ":";
        for (const auto& v : crop.varieties) system += " " + v;
        system += "\n";
    }
    system += "lifecycle:";
    for (auto v : taxonomy_.lifecycles()) system += " " + std::string(to_string(v));
    system += "\nseason:";
    for (auto v : taxonomy_.seasons()) system += " " + std::string(to_string(v));
    system += "\nhealth:";
    for (auto v : taxonomy_.healths()) system += " " + std::string(to_string(v));
    system += "\n";
    return {{"system", system}, {"user", std::string(prompt)}};
}

std::string Frontend::provider_reply(const std::vector<SubQuery>& subqueries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& q : subqueries) arr.push_back(to_json(q));
    return nlohmann::json{{"subqueries", arr}}.dump();
}

std::vector<SubQuery> Frontend::parse_provider_reply(std::string_view reply,
                                                     std::string_view prompt) const {
    const auto open = reply.find('{');
    const auto close = reply.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw MalformedResponseError("provider reply contains no JSON object", 1);
    }
    std::vector<SubQuery> out;
    try {
        const auto doc = nlohmann::json::parse(reply.substr(open, close - open + 1));
        const auto& items = doc.at("subqueries");
        if (!items.is_array() || items.empty()) {
            throw MalformedResponseError("provider reply has no subqueries", 1);
        }
        for (const auto& item : items) {
            SubQuery q;
            auto field = [&](const char* key, FieldClass cls) -> std::optional<std::string> {
                if (!item.contains(key) || item.at(key).is_null()) return std::nullopt;
                return normalize_term(item.at(key).get<std::string>(), cls);
            };
            if (auto v = field("category", FieldClass::Category)) q.category = category_from_string(*v);
            q.crop = field("crop", FieldClass::Crop);
            if (item.contains("variety") && !item.at("variety").is_null()) {
                if (!q.crop) throw MalformedResponseError("variety without crop in provider reply", 1);
                q.variety = taxonomy_.find_variety(*q.crop, item.at("variety").get<std::string>());
                if (!q.variety) throw MalformedResponseError("variety not in crop in provider reply", 1);
            }
            if (q.crop) {
                const auto crop_category = taxonomy_.find_crop(*q.crop)->category;
                if (q.category && *q.category != crop_category) {
                    throw MalformedResponseError("crop/category mismatch in provider reply", 1);
                }
                q.category = crop_category;
            }
            if (auto v = field("lifecycle", FieldClass::Lifecycle)) q.lifecycle = lifecycle_from_string(*v);
            if (auto v = field("season", FieldClass::Season)) q.season = season_from_string(*v);
            if (auto v = field("health", FieldClass::Health)) q.health = health_from_string(*v);
            if (item.contains("quantity") && !item.at("quantity").is_null()) {
                q.quantity = item.at("quantity").get<int>();
                if (*q.quantity < 1) throw MalformedResponseError("non-positive quantity in provider reply", 1);
            }
            q.residual_text = item.value("text", std::string());
            if (prompt.find(q.residual_text) == std::string_view::npos) {
                throw MalformedResponseError("subquery text is not a fragment of the prompt", 1);
            }
            out.push_back(std::move(q));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponseError(std::string("malformed provider reply: ") + e.what(), 1);
    } catch (const UnknownTermError& e) {
        throw MalformedResponseError(std::string("provider reply: ") + e.what(), 1);
    }
    return out;
}

Decomposition Frontend::decompose(std::string_view prompt, FrontendMode mode,
                                  ChatProvider* provider) const {
    if (text::trim(prompt).empty()) throw EmptyPromptError("prompt is empty");
    Decomposition result;
    if (mode == FrontendMode::Provider) {
        if (provider == nullptr) {
            result.warnings.push_back("frontend: provider mode requested without a provider; using rules");
            result.fell_back = true;
        } else {
            try {
                result.subqueries = parse_provider_reply(provider->chat(provider_messages(prompt)), prompt);
                return result;
            } catch (const ProviderError& e) {
                result.warnings.push_back(std::string("frontend: provider failed (") + e.kind() + ": " +
                                          e.what() + "); using rules");
                result.fell_back = true;
            }
        }
    }
    result.subqueries = decompose_rules(prompt);
    return result;
}

SubQuery apply_defaults(const SubQuery& q, const TaxonomyConfig& taxonomy) {
    if (!q.crop) return q;
    const auto* crop = taxonomy.find_crop(*q.crop);
    if (crop == nullptr) return q;
    auto pick = [](auto preferred, const auto& configured) {
        return std::find(configured.begin(), configured.end(), preferred) != configured.end()
                   ? preferred
                   : configured.front();
    };
    SubQuery out = q;
    if (!out.category) out.category = crop->category;
    if (!out.variety) out.variety = crop->varieties.front();
    if (!out.lifecycle) out.lifecycle = pick(Lifecycle::Maturation, taxonomy.lifecycles());
    if (!out.season) out.season = pick(Season::Summer, taxonomy.seasons());
    if (!out.health) out.health = pick(Health::Healthy, taxonomy.healths());
    if (!out.quantity) out.quantity = 1;
    return out;
}

}  // namespace sceneforge
