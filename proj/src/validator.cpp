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

#include "sceneforge/validator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <regex>
#include <set>

#include "sceneforge/errors.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace {

constexpr double kTolerance = 1e-6;

#define SF_NUM "([-+]?(?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][-+]?\\d+)?)"

const std::regex kAssetKey(R"re("asset"\s*:\s*(?:"([^"]*)"|'([^']*)'))re");
const std::regex kNumberKey(R"re("(rows|cols|row_spacing_m|plant_spacing_m)"\s*:\s*)re" SF_NUM);
const std::regex kRow("^\\s*\\(\\(\\s*" SF_NUM "\\s*,\\s*" SF_NUM "\\s*,\\s*" SF_NUM
                      "\\s*\\)\\s*,\\s*" SF_NUM "\\s*,\\s*\\(\\s*" SF_NUM "\\s*,\\s*" SF_NUM
                      "\\s*,\\s*" SF_NUM "\\s*\\)\\s*\\)\\s*,?\\s*$");
const std::regex kStringLiteral(R"re("([^"\\]*)"|'([^'\\]*)')re");
const std::regex kImport(R"re(^\s*import\s+unreal\b)re");
const std::regex kDef(R"re(^def\s+(setup_scene|spawn_field|main)\s*\()re");
const std::regex kLoadAssign(R"re((\w+)\s*=\s*unreal\.(?:EditorAssetLibrary\.)?load_asset\()re");
const std::regex kLoadLiteral(R"re(load_asset\(\s*(?:"([^"]*)"|'([^']*)'))re");
const std::regex kSpawn(R"re(\.spawn_actor_from_object\(\s*([^,)\s]*))re");
const std::regex kAttach(R"re(\.(attach_to_actor|attach_to_component)\()re");
const std::regex kSingletonCtor(R"re(unreal\.(\w*(?:Subsystem|Library|Utilities))\s*\(\s*\))re");
const std::regex kPlacementLoop(R"re(^(\s*)for\b.*\bplacements\b.*:\s*$)re");
const std::regex kIdentifier(R"re([A-Za-z_]\w*)re");

#undef SF_NUM

struct Row {
    double x, y, z, yaw, sx, sy, sz;
    std::size_t line;
};

struct ScriptField {
    std::string asset;
    std::size_t line = 0;
    std::optional<double> rows, cols, row_spacing, plant_spacing;
    std::vector<Row> placements;
};

std::size_t indent_of(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos ? line.size() : line.find_first_not_of(" \t");
}

bool looks_like_asset(const std::string& s) {
    return s.find(".fbx") != std::string::npos || s.starts_with("/Game") ||
           s.starts_with("Fruits/") || s.starts_with("Vegetables/") ||
           (s.find('/') != std::string::npos && s.find(' ') == std::string::npos &&
            std::count(s.begin(), s.end(), '/') >= 3);
}

class Reporter {
public:
    void error(std::string rule, std::string message, std::string location) {
        report_.findings.push_back({std::move(rule), Severity::Error, std::move(message), std::move(location)});
        report_.passed = false;
    }
    void warning(std::string rule, std::string message, std::string location) {
        report_.findings.push_back({std::move(rule), Severity::Warning, std::move(message), std::move(location)});
    }
    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
};

std::string line_loc(std::size_t n) { return "line " + std::to_string(n); }
std::string field_loc(std::size_t n) { return "field " + std::to_string(n); }

bool near(double a, double b, double tol = kTolerance) { return std::abs(a - b) <= tol; }

}  // namespace

bool ValidationReport::has_error(std::string_view rule_id) const {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) {
        return f.severity == Severity::Error && f.rule_id == rule_id;
    });
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
        return f.severity == Severity::Error;
    }));
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json j;
    j["passed"] = passed;
    j["findings"] = nlohmann::json::array();
    for (const auto& f : findings) {
        j["findings"].push_back({{"rule_id", f.rule_id},
                                 {"severity", f.severity == Severity::Error ? "error" : "warning"},
                                 {"message", f.message},
                                 {"location", f.location}});
    }
    return j;
}

ValidationReport validate(const ScriptText& script, const ScenePlan& plan,
                          const TaxonomyConfig& taxonomy, const SceneRecipe* recipe) {
    Reporter out;
    const auto lines = text::split(script.source, '\n');

    std::vector<ScriptField> fields;
    std::vector<std::pair<std::string, std::size_t>> asset_strings;
    std::set<std::string> loaded_vars;
    std::set<std::string> defs;
    bool imported = false;
    struct SpawnCall {
        std::string arg;
        std::size_t line;
        bool in_loop;
    };
    std::vector<SpawnCall> spawns;
    std::optional<std::size_t> loop_indent;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        const std::size_t n = i + 1;
        const auto stripped = text::trim(line);
        if (stripped.empty() || stripped.starts_with("#")) continue;

        if (loop_indent && indent_of(line) <= *loop_indent) loop_indent.reset();
        std::smatch m;
        if (std::regex_search(line, m, kPlacementLoop)) loop_indent = m[1].length();

        if (std::regex_search(line, kImport)) imported = true;
        if (std::regex_search(line, m, kDef)) defs.insert(m[1]);
        if (std::regex_search(line, m, kLoadAssign)) loaded_vars.insert(m[1]);

        if (std::regex_search(line, m, kAssetKey)) {
            ScriptField f;
            f.asset = m[1].matched ? m[1].str() : m[2].str();
            f.line = n;
            fields.push_back(std::move(f));
        } else if (std::regex_search(line, m, kNumberKey) && !fields.empty()) {
            const double v = std::stod(m[2]);
            const auto key = m[1].str();
            auto& f = fields.back();
            if (key == "rows") f.rows = v;
            if (key == "cols") f.cols = v;
            if (key == "row_spacing_m") f.row_spacing = v;
            if (key == "plant_spacing_m") f.plant_spacing = v;
        } else if (std::regex_match(line, m, kRow)) {
            if (fields.empty()) {
                out.error("R5", "placement row outside any field table", line_loc(n));
            } else {
                fields.back().placements.push_back({std::stod(m[1]), std::stod(m[2]), std::stod(m[3]),
                                                    std::stod(m[4]), std::stod(m[5]), std::stod(m[6]),
                                                    std::stod(m[7]), n});
            }
        }

        for (auto it = std::sregex_iterator(line.begin(), line.end(), kStringLiteral);
             it != std::sregex_iterator(); ++it) {
            const auto value = (*it)[1].matched ? (*it)[1].str() : (*it)[2].str();
            if (looks_like_asset(value)) asset_strings.emplace_back(value, n);
        }
        if (std::regex_search(line, m, kLoadLiteral)) {
            const auto value = m[1].matched ? m[1].str() : m[2].str();
            if (!looks_like_asset(value)) asset_strings.emplace_back(value, n);
        }

        if (std::regex_search(line, m, kSpawn)) {
            std::string arg = m[1];
            if (arg.empty()) {
                for (std::size_t k = i + 1; k < lines.size(); ++k) {
                    const auto next = text::trim(lines[k]);
                    if (next.empty()) continue;
                    arg = text::trim(next.substr(0, next.find_first_of(",)")));
                    break;
                }
            }
            spawns.push_back({arg, n, loop_indent.has_value()});
        }

        if (std::regex_search(line, m, kAttach)) {
            // Gather the call text until its parentheses balance.
            std::string call = line.substr(static_cast<std::size_t>(m.position(0)));
            int depth = 0;
            auto balance = [&](const std::string& s) {
                for (char c : s) {
                    if (c == '(') ++depth;
                    if (c == ')') --depth;
                }
            };
            balance(call);
            for (std::size_t k = i + 1; depth > 0 && k < lines.size(); ++k) {
                call += lines[k];
                balance(lines[k]);
            }
            if (call.find("AttachmentRule.") == std::string::npos) {
                out.error("R3", m[1].str() + " called without an unreal.AttachmentRule constant", line_loc(n));
            }
        }
        if (std::regex_search(line, m, kSingletonCtor)) {
            out.error("R3", "editor singleton unreal." + m[1].str() +
                                " constructed directly; use get_editor_subsystem or its static methods",
                      line_loc(n));
        }
    }

    // R1: canonical asset paths.
    std::set<std::string> script_assets;
    for (const auto& [value, n] : asset_strings) {
        script_assets.insert(value);
        try {
            parse_path(value, taxonomy);
        } catch (const Error& e) {
            out.error("R1", std::string("malformed asset path: ") + e.what(), line_loc(n));
        }
    }

    // R3: engine API surface.
    if (!imported) out.error("R3", "script does not import the unreal module", "script");
    for (const auto& s : spawns) {
        if (s.arg.empty() || !std::regex_match(s.arg, kIdentifier)) {
            out.error("R3", "spawn_actor_from_object must receive a loaded asset variable, got '" + s.arg + "'",
                      line_loc(s.line));
        } else if (!loaded_vars.contains(s.arg)) {
            out.error("R3", "spawn_actor_from_object argument '" + s.arg + "' is not a loaded asset",
                      line_loc(s.line));
        }
    }
    for (const char* name : {"setup_scene", "spawn_field", "main"}) {
        if (!defs.contains(name)) {
            out.warning("S1", std::string("script does not define ") + name + "()", "script");
        }
    }

    // R2: same assets as the plan, field by field.
    std::set<std::string> plan_assets;
    for (const auto& f : plan.fields) plan_assets.insert(f.asset.str());
    for (const auto& a : plan_assets) {
        if (!script_assets.contains(a)) out.error("R2", "plan asset missing from script: " + a, "script");
    }
    for (const auto& a : script_assets) {
        if (!plan_assets.contains(a)) out.error("R2", "script references an asset not in the plan: " + a, "script");
    }
    if (fields.size() != plan.fields.size()) {
        out.error("R2", "script has " + std::to_string(fields.size()) + " field tables, plan has " +
                            std::to_string(plan.fields.size()),
                  "script");
    }
    const std::size_t paired = std::min(fields.size(), plan.fields.size());
    for (std::size_t i = 0; i < paired; ++i) {
        if (fields[i].asset != plan.fields[i].asset.str()) {
            out.error("R2", "field table asset " + fields[i].asset + " differs from plan asset " +
                                plan.fields[i].asset.str(),
                      line_loc(fields[i].line));
        }
    }

    // R5: spawn count.
    std::size_t table_rows = 0;
    for (const auto& f : fields) table_rows += f.placements.size();
    std::size_t spawn_count = 0;
    for (const auto& s : spawns) spawn_count += s.in_loop ? table_rows : 1;
    if (spawn_count != plan.placement_count()) {
        out.error("R5", "script spawns " + std::to_string(spawn_count) + " actors, plan has " +
                            std::to_string(plan.placement_count()) + " placements",
                  "script");
    }
    for (std::size_t i = 0; i < paired; ++i) {
        if (fields[i].placements.size() != plan.fields[i].placements.size()) {
            out.error("R5", "field table has " + std::to_string(fields[i].placements.size()) +
                                " placements, plan has " + std::to_string(plan.fields[i].placements.size()),
                      field_loc(i));
        }
    }

    // Recipe lines expanded by quantity, aligned with plan fields.
    std::vector<const RecipeLine*> recipe_fields;
    if (recipe != nullptr) {
        for (const auto& line : recipe->lines) {
            for (int q = 0; q < line.quantity; ++q) recipe_fields.push_back(&line);
        }
        if (recipe_fields.size() != plan.fields.size()) {
            out.error("R4", "recipe describes " + std::to_string(recipe_fields.size()) + " fields, plan has " +
                                std::to_string(plan.fields.size()),
                      "plan");
            recipe_fields.clear();
        }
    }

    // R4: scale.
    for (std::size_t i = 0; i < plan.fields.size(); ++i) {
        const auto& pf = plan.fields[i];
        const double derived = pf.reference_height_m > 0.0 ? pf.plant_height_m / pf.reference_height_m : NAN;
        for (const auto& p : pf.placements) {
            if (!near(p.scale, derived)) {
                out.error("R4", "incorrect scale: plan scale " + text::format_double(p.scale) +
                                    " != entry-derived scale " + text::format_double(derived),
                          field_loc(i));
                break;
            }
        }
        if (!recipe_fields.empty()) {
            const auto& entry = recipe_fields[i]->entry;
            if (pf.entry_id != entry.id || !near(pf.plant_height_m, entry.plant_height_m) ||
                pf.asset != recipe_fields[i]->path) {
                out.error("R4", "plan field does not carry recipe entry " + entry.id, field_loc(i));
            }
            if (!near(pf.row_spacing_m, entry.row_spacing_m) || !near(pf.plant_spacing_m, entry.plant_spacing_m)) {
                out.error("R6", "plan spacing differs from recipe entry " + entry.id, field_loc(i));
            }
        }
        if (i >= paired) continue;
        const auto& sf = fields[i];
        std::size_t bad = 0;
        std::size_t first_bad_line = 0;
        for (std::size_t r = 0; r < sf.placements.size(); ++r) {
            const auto& row = sf.placements[r];
            const bool uniform = row.sx == row.sy && row.sy == row.sz;
            const bool ok = uniform && r < pf.placements.size() && near(row.sx, pf.placements[r].scale);
            if (!ok && bad++ == 0) first_bad_line = row.line;
        }
        if (bad > 0) {
            out.error("R4", "incorrect scale in " + std::to_string(bad) + " placement row(s)", line_loc(first_bad_line));
        }
    }

    // R6: spacing and locations.
    for (std::size_t i = 0; i < paired; ++i) {
        const auto& pf = plan.fields[i];
        const auto& sf = fields[i];
        if (sf.row_spacing && !near(*sf.row_spacing, pf.row_spacing_m)) {
            out.error("R6", "declared row spacing " + text::format_double(*sf.row_spacing) + " m != " +
                                text::format_double(pf.row_spacing_m) + " m",
                      line_loc(sf.line));
        }
        if (sf.plant_spacing && !near(*sf.plant_spacing, pf.plant_spacing_m)) {
            out.error("R6", "declared plant spacing " + text::format_double(*sf.plant_spacing) + " m != " +
                                text::format_double(pf.plant_spacing_m) + " m",
                      line_loc(sf.line));
        }
        if ((sf.rows && *sf.rows != pf.rows) || (sf.cols && *sf.cols != pf.cols)) {
            out.error("R6", "declared field dimensions differ from the plan", line_loc(sf.line));
        }
        const auto cols = static_cast<std::size_t>(pf.cols);
        if (sf.placements.size() == static_cast<std::size_t>(pf.rows) * cols) {
            std::size_t spacing_bad = 0;
            for (std::size_t r = 0; r < sf.placements.size(); ++r) {
                const auto& row = sf.placements[r];
                if (r % cols != 0) {
                    const double dx = (row.x - sf.placements[r - 1].x) / kEngineUnitsPerMeter;
                    if (!near(dx, pf.plant_spacing_m)) ++spacing_bad;
                }
                if (r >= cols) {
                    const double dy = (row.y - sf.placements[r - cols].y) / kEngineUnitsPerMeter;
                    if (!near(dy, pf.row_spacing_m)) ++spacing_bad;
                }
            }
            if (spacing_bad > 0) {
                out.error("R6", "recovered spacing differs from the entry spacing at " +
                                    std::to_string(spacing_bad) + " neighbor pair(s)",
                          field_loc(i));
            }
        }
        std::size_t moved = 0;
        std::size_t turned = 0;
        for (std::size_t r = 0; r < std::min(sf.placements.size(), pf.placements.size()); ++r) {
            const auto& row = sf.placements[r];
            const auto& p = pf.placements[r].position;
            if (!near(row.x / kEngineUnitsPerMeter, p.x) || !near(row.y / kEngineUnitsPerMeter, p.y) ||
                !near(row.z / kEngineUnitsPerMeter, p.z)) {
                ++moved;
            }
            if (!near(row.yaw, pf.placements[r].yaw_deg)) ++turned;
        }
        if (moved > 0) {
            out.error("R6", std::to_string(moved) + " placement location(s) differ from the plan", field_loc(i));
        }
        if (turned > 0) {
            out.warning("W1", std::to_string(turned) + " placement yaw(s) differ from the plan", field_loc(i));
        }
    }

    return out.take();
}

}  // namespace sceneforge
