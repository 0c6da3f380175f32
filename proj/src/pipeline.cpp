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

#include "sceneforge/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "sceneforge/text.hpp"

#ifndef SCENEFORGE_DATA_DIR
#define SCENEFORGE_DATA_DIR "data"
#endif

namespace sceneforge {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const nlohmann::json& j, const char* key, const fs::path& base, const fs::path& fallback) {
    if (!j.contains(key)) return base / fallback;
    fs::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
}

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex(std::uint64_t v) { return text::hex64(v); }

template <class F>
auto run_stage(const char* stage, std::vector<StageTiming>& timings, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
        const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
        timings.push_back({stage, elapsed.count()});
    };
    try {
        auto result = body();
        record();
        return result;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        const auto* err = dynamic_cast<const Error*>(&e);
        throw StageError(stage, err != nullptr ? err->kind() : "Error", e.what(), exit_code_for(e));
    }
}

void add_warnings(Generation& g, const std::string& stage, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) g.warnings.push_back(w.starts_with(stage + ":") ? w : stage + ": " + w);
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->exit_code();
    if (dynamic_cast<const ProviderError*>(&e) != nullptr) return 4;
    if (dynamic_cast<const ConfigError*>(&e) != nullptr || dynamic_cast<const FormatError*>(&e) != nullptr ||
        dynamic_cast<const IndexMissingError*>(&e) != nullptr) {
        return 3;
    }
    return 1;
}

fs::path SceneforgeConfig::data_dir() {
    if (const char* env = std::getenv("SCENEFORGE_DATA_DIR")) return env;
    return SCENEFORGE_DATA_DIR;
}

fs::path SceneforgeConfig::default_path() { return data_dir() / "sceneforge.json"; }

SceneforgeConfig SceneforgeConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
    SceneforgeConfig c;
    try {
        c.taxonomy_file = resolve(j, "taxonomy", base_dir, "taxonomy.json");
        c.synonyms_file = resolve(j, "synonyms", base_dir, "synonyms.json");
        c.kb_file = resolve(j, "knowledge_base", base_dir, "kb.json");
        c.index_dir = resolve(j, "index_dir", base_dir, "index");
        c.embedder = j.value("embedder", c.embedder);
        const auto providers = j.value("providers", nlohmann::json::object());
        c.chat = ProviderConfig::from_json(providers.value("chat", nlohmann::json::object()), base_dir);
        c.embeddings = ProviderConfig::from_json(providers.value("embeddings", nlohmann::json::object()), base_dir);
        c.planner = PlannerConfig::from_json(j.value("planner", nlohmann::json::object()));
        const auto retrieval = j.value("retrieval", nlohmann::json::object());
        c.path_k = retrieval.value("path_k", c.path_k);
        c.kb_k = retrieval.value("kb_k", c.kb_k);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.embedder != "local" && c.embedder != "remote") {
        throw ConfigError("config: embedder must be \"local\" or \"remote\"");
    }
    if (c.path_k == 0 || c.kb_k == 0) throw ConfigError("config: k must be >= 1");
    return c;
}

SceneforgeConfig SceneforgeConfig::load(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + file.string() + ": " + e.what());
    }
    auto c = from_json(j, file.parent_path());
    c.source = file;
    return c;
}

std::string file_fingerprint(const fs::path& file) {
    const auto bytes = read_file(file);
    return hex(text::fnv1a64(bytes));
}

void write_file_atomic(const fs::path& file, const std::string& content) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << content;
        if (!out) throw ConfigError("write failed for " + tmp.string());
    }
    fs::rename(tmp, file);
}

nlohmann::json Generation::partial_json() const {
    nlohmann::json j;
    j["prompt"] = prompt;
    j["completed"] = completed;
    auto done = [&](std::string_view stage) {
        return std::find(completed.begin(), completed.end(), stage) != completed.end();
    };
    if (done("frontend")) {
        j["subqueries"] = nlohmann::json::array();
        for (const auto& q : decomposition.subqueries) j["subqueries"].push_back(to_json(q));
    }
    if (done("retrieval")) j["retrieval"] = retrieval.to_json();
    if (done("knowledge")) j["recipe"] = recipe.to_json();
    if (done("planner")) j["plan"] = plan.to_json();
    if (done("validator")) j["validation"] = report.to_json();
    j["warnings"] = warnings;
    return j;
}

struct Pipeline::State {
    std::optional<TaxonomyConfig> taxonomy;
    std::optional<Frontend> frontend;
    std::shared_ptr<Embedder> embedder;
    std::optional<PathRetriever> retriever;
    std::optional<KnowledgeBase> kb;
    std::unique_ptr<ChatProvider> chat;
};

Pipeline::Pipeline(SceneforgeConfig config, PipelineOptions options)
    : config_(std::move(config)), options_(std::move(options)), state_(std::make_unique<State>()) {}

Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;
Pipeline& Pipeline::operator=(Pipeline&&) noexcept = default;

std::uint64_t Pipeline::seed() const { return options_.seed.value_or(config_.seed); }

const TaxonomyConfig& Pipeline::taxonomy() {
    if (!state_->taxonomy) state_->taxonomy = TaxonomyConfig::load(config_.taxonomy_file);
    return *state_->taxonomy;
}

const Frontend& Pipeline::frontend() {
    if (!state_->frontend) {
        const auto& tax = taxonomy();
        state_->frontend.emplace(tax, NormalizationTable::load(config_.synonyms_file, tax));
    }
    return *state_->frontend;
}

ChatProvider& Pipeline::chat_provider() {
    if (!state_->chat) state_->chat = make_chat_provider(config_.chat, options_.session);
    return *state_->chat;
}

std::shared_ptr<Embedder> Pipeline::embedder() {
    if (!state_->embedder) {
        if (config_.embedder == "remote") {
            std::shared_ptr<EmbeddingProvider> provider = make_embedding_provider(config_.embeddings, options_.session);
            state_->embedder = std::make_shared<RemoteEmbedder>(provider, config_.embeddings.dimension);
        } else {
            state_->embedder = std::make_shared<LocalEmbedder>();
        }
    }
    return state_->embedder;
}

nlohmann::json Pipeline::index_meta() {
    if (!fs::exists(config_.kb_file)) throw FormatError("knowledge base file not found: " + config_.kb_file.string());
    return {{"format", "VIDX1"},
            {"embedder", embedder()->name()},
            {"taxonomy", hex(taxonomy().fingerprint())},
            {"knowledge_base", file_fingerprint(config_.kb_file)}};
}

namespace {

std::optional<VectorIndex> cached_index(const fs::path& dir, const char* file, const nlohmann::json& meta) {
    const auto meta_file = dir / "index.json";
    if (!fs::exists(meta_file) || !fs::exists(dir / file)) return std::nullopt;
    try {
        if (nlohmann::json::parse(read_file(meta_file)) != meta) return std::nullopt;
        return VectorIndex::load_file(dir / file);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

const PathRetriever& Pipeline::retriever() {
    if (!state_->retriever) {
        const auto& tax = taxonomy();
        auto emb = embedder();
        std::optional<VectorIndex> index;
        if (config_.embedder == "local" && fs::exists(config_.kb_file)) {
            index = cached_index(config_.index_dir, "paths.vidx", index_meta());
        }
        if (!index) index = PathRetriever::build_index(tax, *emb);
        state_->retriever.emplace(tax, emb, std::move(*index));
    }
    return *state_->retriever;
}

const KnowledgeBase& Pipeline::knowledge_base() {
    if (!state_->kb) {
        const auto& tax = taxonomy();
        auto entries = KnowledgeBase::load_entries(config_.kb_file);
        auto emb = embedder();
        std::optional<VectorIndex> index;
        if (config_.embedder == "local") index = cached_index(config_.index_dir, "kb.vidx", index_meta());
        state_->kb.emplace(tax, std::move(entries), emb, std::move(index));
    }
    return *state_->kb;
}

Decomposition Pipeline::decompose(std::string_view prompt) {
    const auto& fe = frontend();
    if (options_.frontend_mode == FrontendMode::Provider) {
        return fe.decompose(prompt, FrontendMode::Provider, &chat_provider());
    }
    return fe.decompose(prompt, FrontendMode::Rules);
}

RetrievalResult Pipeline::retrieve(const Decomposition& decomposition) {
    const auto& r = retriever();
    ChatProvider* check = options_.provider_path_check ? &chat_provider() : nullptr;
    auto result = r.retrieve_paths(decomposition.subqueries, options_.path_k.value_or(config_.path_k), check);
    return r.validate_consistency(std::move(result));
}

SceneRecipe Pipeline::enrich(const RetrievalResult& retrieval, FallbackLog* log) {
    EnrichOptions opts;
    opts.k = options_.kb_k.value_or(config_.kb_k);
    opts.mode = options_.kb_mode;
    opts.rows = options_.rows.value_or(config_.planner.rows);
    opts.cols = options_.cols.value_or(config_.planner.cols);
    return sceneforge::enrich(retrieval, knowledge_base(), taxonomy(), opts, log);
}

ScenePlan Pipeline::plan(const SceneRecipe& recipe) {
    auto cfg = config_.planner;
    if (options_.gap_m) cfg.gap_m = *options_.gap_m;
    return plan_scene(recipe, seed(), cfg);
}

ScriptText Pipeline::emit(const ScenePlan& plan, const SceneRecipe& recipe, const std::string& plan_ref) {
    if (options_.provider_emit) return emit_script_with_provider(plan, recipe, chat_provider(), plan_ref);
    return emit_script(plan, plan_ref);
}

Generation Pipeline::generate(std::string_view prompt, const std::string& plan_ref) {
    Generation g;
    generate_into(g, prompt, plan_ref);
    return g;
}

void Pipeline::generate_into(Generation& g, std::string_view prompt, const std::string& plan_ref) {
    g.prompt = std::string(prompt);
    g.decomposition = run_stage("frontend", g.timings, [&] { return decompose(prompt); });
    g.completed.push_back("frontend");
    add_warnings(g, "frontend", g.decomposition.warnings);

    g.retrieval = run_stage("retrieval", g.timings, [&] { return retrieve(g.decomposition); });
    g.completed.push_back("retrieval");
    add_warnings(g, "retrieval", g.retrieval.warnings);

    FallbackLog log;
    try {
        g.recipe = run_stage("knowledge", g.timings, [&] { return enrich(g.retrieval, &log); });
    } catch (...) {
        g.fallback_events = log.events();
        throw;
    }
    g.fallback_events = log.events();
    g.completed.push_back("knowledge");
    add_warnings(g, "knowledge", g.recipe.warnings);

    g.plan = run_stage("planner", g.timings, [&] { return plan(g.recipe); });
    g.completed.push_back("planner");

    g.script = run_stage("emitter", g.timings, [&] { return emit(g.plan, g.recipe, plan_ref); });
    g.completed.push_back("emitter");

    g.report = run_stage("validator", g.timings, [&] {
        return sceneforge::validate(g.script, g.plan, taxonomy(), &g.recipe);
    });
    g.completed.push_back("validator");
}

nlohmann::json Pipeline::config_hashes() {
    nlohmann::json j;
    if (!config_.source.empty()) j["config"] = file_fingerprint(config_.source);
    j["taxonomy"] = file_fingerprint(config_.taxonomy_file);
    j["synonyms"] = file_fingerprint(config_.synonyms_file);
    j["knowledge_base"] = file_fingerprint(config_.kb_file);
    return j;
}

OutputFiles Pipeline::write_outputs(const Generation& g, const fs::path& out_dir, const std::string& name) {
    OutputFiles files;
    files.script = out_dir / (name + ".py");
    files.plan = out_dir / (name + ".plan.json");
    files.report = out_dir / (name + ".report.json");
    files.manifest = out_dir / (name + ".manifest.json");
    std::vector<fs::path> written;
    try {
        write_file_atomic(files.script, g.script.source);
        written.push_back(files.script);
        write_file_atomic(files.plan, g.plan.to_json().dump(2) + "\n");
        written.push_back(files.plan);

        nlohmann::json report = g.report.to_json();
        report["warnings"] = g.warnings;
        report["paths"] = nlohmann::json::array();
        for (const auto& p : g.retrieval.paths) report["paths"].push_back(p.str());
        report["recipe"] = g.recipe.to_json();
        write_file_atomic(files.report, report.dump(2) + "\n");
        written.push_back(files.report);

        if (!g.fallback_events.empty()) {
            files.fallbacks = out_dir / (name + ".fallbacks.jsonl");
            std::string lines;
            for (const auto& e : g.fallback_events) lines += e.dump() + "\n";
            write_file_atomic(*files.fallbacks, lines);
            written.push_back(*files.fallbacks);
        }

        nlohmann::json manifest;
        manifest["prompt"] = g.prompt;
        manifest["seed"] = seed();
        manifest["config_hashes"] = config_hashes();
        manifest["modes"] = {{"frontend", options_.frontend_mode == FrontendMode::Rules ? "rules" : "provider"},
                             {"kb", std::string(to_string(options_.kb_mode))},
                             {"emit", options_.provider_emit ? "provider" : "template"}};
        nlohmann::json timings = nlohmann::json::object();
        for (const auto& t : g.timings) timings[t.stage] = t.ms;
        manifest["timings_ms"] = timings;
        manifest["passed"] = g.report.passed;
        manifest["outputs"] = nlohmann::json::array();
        for (const auto& f : written) manifest["outputs"].push_back(f.string());
        write_file_atomic(files.manifest, manifest.dump(2) + "\n");
    } catch (...) {
        for (const auto& f : written) fs::remove(f);
        throw;
    }
    return files;
}

std::vector<fs::path> Pipeline::build_indexes(const fs::path& dir, const std::optional<fs::path>& manifest) {
    const auto meta = index_meta();
    const auto entries = KnowledgeBase::load_entries(config_.kb_file);
    auto emb = embedder();
    const auto paths_index = PathRetriever::build_index(taxonomy(), *emb);
    const auto kb_index = KnowledgeBase::build_index(entries, *emb);

    fs::create_directories(dir);
    std::vector<fs::path> out{dir / "paths.vidx", dir / "kb.vidx", dir / "index.json"};
    write_file_atomic(out[0], paths_index.save());
    write_file_atomic(out[1], kb_index.save());
    write_file_atomic(out[2], meta.dump(2) + "\n");
    if (manifest) {
        std::string lines;
        for (const auto& p : enumerate_paths(taxonomy())) lines += p.str() + "\n";
        write_file_atomic(*manifest, lines);
        out.push_back(*manifest);
    }
    return out;
}

}  // namespace sceneforge
