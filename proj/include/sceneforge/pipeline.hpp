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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/emitter.hpp"
#include "sceneforge/errors.hpp"
#include "sceneforge/frontend.hpp"
#include "sceneforge/knowledge.hpp"
#include "sceneforge/planner.hpp"
#include "sceneforge/providers.hpp"
#include "sceneforge/retrieval.hpp"
#include "sceneforge/taxonomy.hpp"
#include "sceneforge/validator.hpp"

namespace sceneforge {

/// Contents of a sceneforge.json config file. Relative paths resolve
/// against the config file's directory.
struct SceneforgeConfig {
    std::filesystem::path source;
    std::filesystem::path taxonomy_file;
    std::filesystem::path synonyms_file;
    std::filesystem::path kb_file;
    std::filesystem::path index_dir;
    /// "local" (trigram hashing) or "remote" (embeddings provider).
    std::string embedder = "local";
    ProviderConfig chat;
    ProviderConfig embeddings;
    PlannerConfig planner;
    std::size_t path_k = kDefaultPathK;
    std::size_t kb_k = kDefaultKnowledgeK;
    std::uint64_t seed = 42;

    static SceneforgeConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
    /// Throws ConfigError when missing or malformed.
    static SceneforgeConfig load(const std::filesystem::path& file);
    /// The bundled data/sceneforge.json.
    static std::filesystem::path default_path();
    static std::filesystem::path data_dir();
};

struct PipelineOptions {
    FrontendMode frontend_mode = FrontendMode::Rules;
    KbMode kb_mode = KbMode::Hybrid;
    bool provider_emit = false;
    /// Ask the chat provider to confirm path candidates (reject-only).
    bool provider_path_check = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> path_k;
    std::optional<std::size_t> kb_k;
    std::optional<int> rows;
    std::optional<int> cols;
    std::optional<double> gap_m;
    ProviderSession session;
};

/// A failure tagged with the pipeline stage that raised it.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, std::string kind, const std::string& message, int exit_code)
        : std::runtime_error(message), stage_(std::move(stage)), kind_(std::move(kind)), exit_code_(exit_code) {}
    const std::string& stage() const noexcept { return stage_; }
    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string stage_;
    std::string kind_;
    int exit_code_;
};

/// Process exit code for an error: 3 configuration/format, 4 provider, 1 other.
int exit_code_for(const std::exception& e);

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct Generation {
    std::string prompt;
    Decomposition decomposition;
    RetrievalResult retrieval;
    SceneRecipe recipe;
    ScenePlan plan;
    ScriptText script;
    ValidationReport report;
    std::vector<nlohmann::json> fallback_events;
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;
    /// Stages finished so far, in order.
    std::vector<std::string> completed;

    /// The completed stages' outputs as one JSON document.
    nlohmann::json partial_json() const;
};

struct OutputFiles {
    std::filesystem::path script;
    std::filesystem::path plan;
    std::filesystem::path report;
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> fallbacks;
};

/// Loads configuration lazily and runs the stages. Indexes are read from
/// the configured index directory when their recorded fingerprints match
/// the current inputs, and rebuilt in memory otherwise.
class Pipeline {
public:
    Pipeline(SceneforgeConfig config, PipelineOptions options = {});
    ~Pipeline();
    Pipeline(Pipeline&&) noexcept;
    Pipeline& operator=(Pipeline&&) noexcept;

    const SceneforgeConfig& config() const noexcept { return config_; }
    const PipelineOptions& options() const noexcept { return options_; }
    std::uint64_t seed() const;

    const TaxonomyConfig& taxonomy();
    const Frontend& frontend();
    const PathRetriever& retriever();
    const KnowledgeBase& knowledge_base();
    ChatProvider& chat_provider();

    Decomposition decompose(std::string_view prompt);
    RetrievalResult retrieve(const Decomposition& decomposition);
    SceneRecipe enrich(const RetrievalResult& retrieval, FallbackLog* log = nullptr);
    ScenePlan plan(const SceneRecipe& recipe);
    ScriptText emit(const ScenePlan& plan, const SceneRecipe& recipe, const std::string& plan_ref);

    /// Runs every stage. Stage failures surface as StageError.
    Generation generate(std::string_view prompt, const std::string& plan_ref = "scene.plan.json");
    /// As generate, filling `g` stage by stage so a failed run keeps what
    /// completed.
    void generate_into(Generation& g, std::string_view prompt, const std::string& plan_ref);

    /// Writes <name>.py, <name>.plan.json, <name>.report.json, the fallback
    /// log when non-empty, and finally <name>.manifest.json (atomically).
    OutputFiles write_outputs(const Generation& g, const std::filesystem::path& out_dir,
                              const std::string& name);

    /// Builds paths.vidx, kb.vidx and index.json in `dir`; optionally a
    /// plain-text manifest with one asset path per line.
    std::vector<std::filesystem::path> build_indexes(const std::filesystem::path& dir,
                                                     const std::optional<std::filesystem::path>& manifest);

    /// Hex fingerprints of the active config inputs.
    nlohmann::json config_hashes();

private:
    struct State;
    std::shared_ptr<Embedder> embedder();
    nlohmann::json index_meta();

    SceneforgeConfig config_;
    PipelineOptions options_;
    std::unique_ptr<State> state_;
};

/// Writes `content` to `file` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& file, const std::string& content);

std::string file_fingerprint(const std::filesystem::path& file);

}  // namespace sceneforge
