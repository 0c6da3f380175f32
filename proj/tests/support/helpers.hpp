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
#include <random>
#include <string>
#include <vector>

#include "sceneforge/knowledge.hpp"
#include "sceneforge/pipeline.hpp"
#include "sceneforge/taxonomy.hpp"

namespace sceneforge::testing {

std::filesystem::path data_dir();
std::filesystem::path fixtures_dir();

SceneforgeConfig default_config();
const TaxonomyConfig& default_taxonomy();
/// Bundled KB with the local embedder; built once per process.
const KnowledgeBase& default_kb();

struct Adversarial {
    std::vector<KnowledgeEntry> entries;
    std::vector<AssetPath> queries;
};
Adversarial adversarial_fixture();

/// 1-3 lines of random KB entries with random quantity and dimensions.
SceneRecipe random_recipe(std::mt19937_64& rng, const KnowledgeBase& kb, int max_lines = 3, int max_dim = 6);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

struct CommandResult {
    int exit_code = -1;
    std::string out;
};
/// Runs the sceneforge binary with `args` (already shell-quoted), capturing
/// stdout; stderr is discarded.
CommandResult run_cli(const std::string& args);
std::string shell_quote(const std::string& s);

std::string read_file(const std::filesystem::path& file);

}  // namespace sceneforge::testing
