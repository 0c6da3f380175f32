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

#include "support/helpers.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <sys/wait.h>

namespace sceneforge::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return SCENEFORGE_TEST_DATA; }
fs::path fixtures_dir() { return SCENEFORGE_TEST_FIXTURES; }

SceneforgeConfig default_config() { return SceneforgeConfig::load(data_dir() / "sceneforge.json"); }

const TaxonomyConfig& default_taxonomy() {
    static const TaxonomyConfig tax = TaxonomyConfig::load(data_dir() / "taxonomy.json");
    return tax;
}

const KnowledgeBase& default_kb() {
    static const KnowledgeBase kb(default_taxonomy(), KnowledgeBase::load_entries(data_dir() / "kb.json"),
                                  std::make_shared<LocalEmbedder>());
    return kb;
}

Adversarial adversarial_fixture() {
    Adversarial a;
    a.entries = KnowledgeBase::load_entries(fixtures_dir() / "adversarial_kb.json");
    std::ifstream in(fixtures_dir() / "adversarial_queries.json");
    for (const auto& q : nlohmann::json::parse(in)) a.queries.emplace_back(q.get<std::string>());
    return a;
}

SceneRecipe random_recipe(std::mt19937_64& rng, const KnowledgeBase& kb, int max_lines, int max_dim) {
    const auto& tax = default_taxonomy();
    std::uniform_int_distribution<std::size_t> pick(0, kb.size() - 1);
    std::uniform_int_distribution<int> lines(1, max_lines), qty(1, 2), dim(1, max_dim);
    SceneRecipe recipe;
    const int n = lines(rng);
    for (int i = 0; i < n; ++i) {
        const auto& entry = kb.entries()[pick(rng)];
        RecipeLine line;
        line.path = format_path(entry.meta, tax);
        line.entry = entry;
        line.quantity = qty(rng);
        line.rows = dim(rng);
        line.cols = dim(rng);
        line.rank = 1;
        recipe.lines.push_back(std::move(line));
    }
    return recipe;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sceneforge-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

CommandResult run_cli(const std::string& args) {
    const std::string cmd = shell_quote(SCENEFORGE_CLI) + " " + args + " 2>/dev/null";
    CommandResult r;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe.release());
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace sceneforge::testing
