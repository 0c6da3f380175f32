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

// sceneforge command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sceneforge/eval.hpp"
#include "sceneforge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sceneforge;

namespace {

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    bool json = false;
    std::string frontend_mode = "rules";
    std::string kb_mode = "hybrid";
    std::string emit_mode = "template";
    std::string taxonomy, synonyms, kb, index_dir;
    std::string record, replay;
    std::optional<std::size_t> k;
    std::optional<int> rows, cols;
    std::optional<double> gap;
};

nlohmann::json read_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open " + file.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(file.string() + ": " + e.what());
    }
}

std::string read_text(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FormatError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_or_print(const std::string& out, const std::string& content) {
    if (out.empty()) {
        std::cout << content;
    } else {
        write_file_atomic(out, content);
    }
}

Pipeline make_pipeline(const GlobalFlags& g) {
    auto config = SceneforgeConfig::load(g.config.empty() ? SceneforgeConfig::default_path() : fs::path(g.config));
    if (!g.taxonomy.empty()) config.taxonomy_file = g.taxonomy;
    if (!g.synonyms.empty()) config.synonyms_file = g.synonyms;
    if (!g.kb.empty()) config.kb_file = g.kb;
    if (!g.index_dir.empty()) config.index_dir = g.index_dir;

    PipelineOptions opts;
    opts.frontend_mode = g.frontend_mode == "provider" ? FrontendMode::Provider : FrontendMode::Rules;
    opts.kb_mode = g.kb_mode == "rag" ? KbMode::Rag : KbMode::Hybrid;
    opts.provider_emit = g.emit_mode == "provider";
    opts.seed = g.seed;
    opts.path_k = g.k;
    opts.rows = g.rows;
    opts.cols = g.cols;
    opts.gap_m = g.gap;
    if (!g.record.empty()) opts.session.record_dir = g.record;
    if (!g.replay.empty()) opts.session.replay_dir = g.replay;
    return Pipeline(std::move(config), std::move(opts));
}

int report_error(const GlobalFlags& g, const std::exception& e) {
    std::string stage, kind = "Error";
    if (const auto* s = dynamic_cast<const StageError*>(&e)) {
        stage = s->stage();
        kind = s->kind();
    } else if (const auto* err = dynamic_cast<const Error*>(&e)) {
        kind = err->kind();
    }
    if (g.json) {
        nlohmann::json j{{"error", {{"kind", kind}, {"message", e.what()}}}};
        if (!stage.empty()) j["error"]["stage"] = stage;
        std::cout << j.dump(2) << "\n";
    }
    std::cerr << "sceneforge: " << (stage.empty() ? "" : "[" + stage + "] ") << kind << ": " << e.what() << "\n";
    return exit_code_for(e);
}

void print_summary(const ValidationReport& report) {
    std::size_t warnings = report.findings.size() - report.error_count();
    std::cout << "validation " << (report.passed ? "passed" : "FAILED") << ": " << report.error_count()
              << " error(s), " << warnings << " warning(s)\n";
    for (const auto& f : report.findings) {
        std::cout << "  " << f.rule_id << " " << (f.severity == Severity::Error ? "error" : "warning") << " ["
                  << f.location << "] " << f.message << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sceneforge: compile crop-field prompts into engine scene scripts"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--config", g.config, "Config file (default: bundled data/sceneforge.json)");
    app.add_option("--seed", g.seed, "Placement seed");
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--frontend-mode", g.frontend_mode)->check(CLI::IsMember({"rules", "provider"}));
    app.add_option("--kb-mode", g.kb_mode)->check(CLI::IsMember({"rag", "hybrid"}));
    app.add_option("--emit-mode", g.emit_mode)->check(CLI::IsMember({"template", "provider"}));
    app.add_option("--taxonomy", g.taxonomy, "Taxonomy file");
    app.add_option("--synonyms", g.synonyms, "Synonym table");
    app.add_option("--kb", g.kb, "Knowledge base file");
    app.add_option("--index-dir", g.index_dir, "Directory holding persisted indexes");
    app.add_option("--record", g.record, "Record provider traffic into this directory");
    app.add_option("--replay", g.replay, "Replay provider traffic from this directory");
    app.add_option("--k", g.k, "Path retrieval candidates");
    app.add_option("--rows", g.rows, "Rows per field");
    app.add_option("--cols", g.cols, "Plants per row");
    app.add_option("--gap", g.gap, "Gap between fields in meters");
    app.fallthrough();

    std::string prompt, out, name = "scene", input, plan_file, recipe_file, script_file, cases, manifest, runner = "mock-runner", work_dir;
    bool keep_partial = false, with_execution = false;

    auto* generate = app.add_subcommand("generate", "Prompt to script, plan, report and manifest");
    generate->add_option("prompt,--prompt", prompt)->required();
    generate->add_option("--out", out, "Output directory (default: .)");
    generate->add_option("--name", name, "Output file stem");
    generate->add_flag("--keep-partial", keep_partial, "Keep completed stage outputs on failure");

    auto* retrieve = app.add_subcommand("retrieve", "Prompt to asset paths");
    retrieve->add_option("prompt,--prompt", prompt)->required();

    auto* enrich = app.add_subcommand("enrich", "Asset paths to a scene recipe");
    auto* enrich_prompt = enrich->add_option("--prompt", prompt);
    enrich->add_option("--retrieval", input, "RetrievalResult JSON file")->excludes(enrich_prompt);
    enrich->add_option("--out", out);

    auto* plan = app.add_subcommand("plan", "Recipe to scene plan");
    plan->add_option("--recipe", recipe_file)->required();
    plan->add_option("--out", out);

    auto* emit = app.add_subcommand("emit", "Plan to editor script");
    emit->add_option("--plan", plan_file)->required();
    emit->add_option("--recipe", recipe_file, "Needed with --emit-mode provider");
    emit->add_option("--out", out);

    auto* validate = app.add_subcommand("validate", "Check a script against its plan");
    validate->add_option("--script", script_file)->required();
    validate->add_option("--plan", plan_file)->required();
    validate->add_option("--recipe", recipe_file);

    auto* eval = app.add_subcommand("eval", "Run a prompt benchmark");
    eval->add_option("--cases", cases, "Benchmark JSON-lines file");
    eval->add_option("--out", out, "Report file");
    eval->add_flag("--with-execution", with_execution, "Execute scripts with the mock runner");
    eval->add_option("--runner", runner, "Runner executable");
    eval->add_option("--work-dir", work_dir, "Scratch directory for executed scripts");

    auto* index = app.add_subcommand("index", "Build and persist the path and knowledge indexes");
    index->add_option("--dir", out, "Index directory (default: config index_dir)");
    index->add_option("--manifest", manifest, "Also write the asset path list here");

    CLI11_PARSE(app, argc, argv);

    try {
        auto pipeline = make_pipeline(g);

        if (*generate) {
            Generation gen;
            const fs::path out_dir = out.empty() ? fs::path(".") : fs::path(out);
            try {
                pipeline.generate_into(gen, prompt, name + ".plan.json");
            } catch (const std::exception& e) {
                if (keep_partial) {
                    write_file_atomic(out_dir / (name + ".partial.json"), gen.partial_json().dump(2) + "\n");
                }
                return report_error(g, e);
            }
            const auto files = pipeline.write_outputs(gen, out_dir, name);
            if (g.json) {
                nlohmann::json j{{"script", files.script.string()},
                                 {"plan", files.plan.string()},
                                 {"report", files.report.string()},
                                 {"manifest", files.manifest.string()},
                                 {"validation", gen.report.to_json()},
                                 {"warnings", gen.warnings}};
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& w : gen.warnings) std::cerr << "warning: " << w << "\n";
                print_summary(gen.report);
                std::cout << "wrote " << files.script.string() << ", " << files.plan.string() << ", "
                          << files.report.string() << ", " << files.manifest.string() << "\n";
            }
            return gen.report.passed ? 0 : 2;
        }

        if (*retrieve) {
            const auto result = pipeline.retrieve(pipeline.decompose(prompt));
            std::cout << result.to_json().dump(2) << "\n";
            return 0;
        }

        if (*enrich) {
            RetrievalResult retrieval;
            if (!input.empty()) {
                retrieval = RetrievalResult::from_json(read_json(input));
            } else if (!prompt.empty()) {
                retrieval = pipeline.retrieve(pipeline.decompose(prompt));
            } else {
                throw ConfigError("enrich needs --prompt or --retrieval");
            }
            FallbackLog log;
            const auto recipe = pipeline.enrich(retrieval, &log);
            for (const auto& e : log.events()) std::cerr << "fallback: " << e.dump() << "\n";
            write_or_print(out, recipe.to_json().dump(2) + "\n");
            return 0;
        }

        if (*plan) {
            const auto recipe = SceneRecipe::from_json(read_json(recipe_file));
            write_or_print(out, pipeline.plan(recipe).to_json().dump(2) + "\n");
            return 0;
        }

        if (*emit) {
            const auto scene = ScenePlan::load(plan_file);
            SceneRecipe recipe;
            if (!recipe_file.empty()) recipe = SceneRecipe::from_json(read_json(recipe_file));
            if (pipeline.options().provider_emit && recipe_file.empty()) {
                throw ConfigError("--emit-mode provider needs --recipe");
            }
            const auto script = pipeline.emit(scene, recipe, fs::path(plan_file).filename().string());
            write_or_print(out, script.source);
            return 0;
        }

        if (*validate) {
            const ScriptText script{read_text(script_file), plan_file};
            const auto scene = ScenePlan::load(plan_file);
            std::optional<SceneRecipe> recipe;
            if (!recipe_file.empty()) recipe = SceneRecipe::from_json(read_json(recipe_file));
            const auto report =
                sceneforge::validate(script, scene, pipeline.taxonomy(), recipe ? &*recipe : nullptr);
            if (g.json) {
                std::cout << report.to_json().dump(2) << "\n";
            } else {
                print_summary(report);
            }
            return report.passed ? 0 : 1;
        }

        if (*eval) {
            const fs::path cases_file =
                cases.empty() ? SceneforgeConfig::data_dir() / "benchmark.jsonl" : fs::path(cases);
            const auto bench = load_benchmark(cases_file, pipeline.taxonomy());
            BenchmarkOptions opts;
            opts.with_execution = with_execution;
            opts.runner = runner;
            opts.work_dir = work_dir.empty() ? fs::temp_directory_path() / "sceneforge-eval" : fs::path(work_dir);
            const auto report = run_benchmark(bench, pipeline, opts);
            const auto text = report.to_json().dump(2) + "\n";
            if (!out.empty()) write_file_atomic(out, text);
            if (g.json || out.empty()) {
                std::cout << text;
            } else {
                for (const auto& [cat, agg] : report.categories) {
                    std::cout << to_string(cat) << ": accuracy " << agg.accuracy << " over " << agg.count
                              << " case(s)\n";
                }
                std::cout << "wrote " << out << "\n";
            }
            return 0;
        }

        if (*index) {
            const fs::path dir = out.empty() ? pipeline.config().index_dir : fs::path(out);
            std::optional<fs::path> manifest_path;
            if (!manifest.empty()) manifest_path = manifest;
            const auto files = pipeline.build_indexes(dir, manifest_path);
            if (g.json) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& f : files) j.push_back(f.string());
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        return report_error(g, e);
    }
    return 0;
}
