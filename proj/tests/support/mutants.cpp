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

#include "support/mutants.hpp"

#include <stdexcept>

namespace sceneforge::testing {

namespace {

std::string replace_first(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    if (pos == std::string::npos) throw std::logic_error("mutant anchor not found: " + from);
    return s.replace(pos, from.size(), to);
}

// Byte range of the n-th placement row line.
std::pair<std::size_t, std::size_t> row_line(const std::string& s, std::size_t n) {
    std::size_t pos = 0;
    for (std::size_t seen = 0;; ++seen) {
        pos = s.find("            ((", pos);
        if (pos == std::string::npos) throw std::logic_error("placement row not found");
        if (seen == n) break;
        ++pos;
    }
    return {pos, s.find('\n', pos) + 1};
}

// Byte range of the n-th "    {\n ... \n    },\n" field table.
std::pair<std::size_t, std::size_t> field_table(const std::string& s, std::size_t n) {
    std::size_t pos = 0;
    for (std::size_t seen = 0;; ++seen) {
        pos = s.find("    {\n        \"asset\"", pos);
        if (pos == std::string::npos) throw std::logic_error("field table not found");
        if (seen == n) break;
        ++pos;
    }
    return {pos, s.find("\n    },\n", pos) + 8};
}

}  // namespace

std::vector<Mutant> mutation_corpus(const ScriptText& pristine, const ScenePlan& plan) {
    const std::string& s = pristine.source;
    const std::string asset = plan.fields.at(0).asset.str();
    std::vector<Mutant> out;

    out.push_back({"prefix_strip", replace_first(s, "\"" + asset + "\"", "\"" + asset.substr(6) + "\"")});
    out.push_back({"suffix_strip",
                   replace_first(s, "\"" + asset + "\"", "\"" + asset.substr(0, asset.size() - 4) + "\"")});
    {
        std::string typo = asset;
        typo[typo.find("/Game/") + 7] = 'x';
        out.push_back({"path_typo", replace_first(s, "\"" + asset + "\"", "\"" + typo + "\"")});
    }
    {
        const auto [b, e] = row_line(s, 3);
        out.push_back({"dropped_spawn", s.substr(0, b) + s.substr(e)});
    }
    {
        const auto [b, e] = row_line(s, 3);
        out.push_back({"doubled_spawn", s.substr(0, e) + s.substr(b, e - b) + s.substr(e)});
    }
    {
        std::string m = s;
        const auto [b, e] = row_line(m, 0);
        std::string line = m.substr(b, e - b);
        const auto scale_open = line.rfind(", (");
        const auto scale = line.substr(scale_open + 3, line.find(',', scale_open + 3) - scale_open - 3);
        const auto doubled = std::to_string(std::stod(scale) * 2.0);
        line = line.substr(0, scale_open) + ", (" + doubled + ", " + doubled + ", " + doubled + ")),\n";
        out.push_back({"scale_x2", m.replace(b, e - b, line)});
    }
    {
        const auto& f = plan.fields.at(0);
        const auto key = "\"plant_spacing_m\": ";
        const auto pos = s.find(key);
        const auto end = s.find(',', pos);
        std::string m = s;
        m.replace(pos + std::string(key).size(), end - pos - std::string(key).size(),
                  std::to_string(f.plant_spacing_m + 1.0));
        out.push_back({"spacing_plus_one", m});
    }
    out.push_back({"missing_attachment_rule",
                   replace_first(s, "        spawned.append(actor)\n",
                                 "        spawned.append(actor)\n"
                                 "        if len(spawned) > 1:\n"
                                 "            actor.attach_to_actor(spawned[0], \"\")\n")});
    out.push_back({"constructor_misuse",
                   replace_first(s, "    return unreal.get_editor_subsystem(unreal.EditorActorSubsystem)",
                                 "    return unreal.EditorActorSubsystem()")});
    {
        const std::string foreign =
            "/Game/Vegetables/Carrot/Danvers/Vegetative/Winter/Ill/Danvers_Vegetative_Winter_Ill.fbx";
        const std::string other = foreign == asset ? "/Game/Fruits/Apple/Fuji/Vegetative/Winter/Ill/"
                                                     "Fuji_Vegetative_Winter_Ill.fbx"
                                                   : foreign;
        out.push_back({"foreign_path_injection",
                       replace_first(s, "def main():\n",
                                     "def main():\n    unreal.EditorAssetLibrary.load_asset(\"" + other + "\")\n")});
    }
    {
        const auto [b0, e0] = field_table(s, 0);
        const auto [b1, e1] = field_table(s, 1);
        out.push_back({"swapped_field_tables",
                       s.substr(0, b0) + s.substr(b1, e1 - b1) + s.substr(e0, b1 - e0) + s.substr(b0, e0 - b0) +
                           s.substr(e1)});
    }
    out.push_back({"empty_script", ""});
    return out;
}

}  // namespace sceneforge::testing
