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

#include "sceneforge/eval.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "sceneforge/errors.hpp"
#include "sceneforge/pipeline.hpp"
#include "sceneforge/text.hpp"

namespace sceneforge {

namespace fs = std::filesystem;

namespace {

constexpr const char* kAggregation =
    "accuracy: exact equality of predicted and expected path sets per prompt; precision, recall and f1: "
    "computed per prompt over path sets, then averaged over the prompts of a category; multi_generic "
    "reports accuracy only";

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

nlohmann::json metrics_json(const SetMetrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

std::string_view to_string(CaseCategory c) {
    switch (c) {
        case CaseCategory::SingleDetailed: return "single_detailed";
        case CaseCategory::SingleGeneric: return "single_generic";
        case CaseCategory::MultiGeneric: return "multi_generic";
    }
    return "single_detailed";
}

std::optional<CaseCategory> case_category_from_string(std::string_view s) {
    for (auto c : {CaseCategory::SingleDetailed, CaseCategory::SingleGeneric, CaseCategory::MultiGeneric}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::vector<BenchmarkCase> load_benchmark(const fs::path& file, const TaxonomyConfig& taxonomy) {
    std::ifstream in(file);
    if (!in) throw BenchmarkFormatError("cannot open benchmark file " + file.string());
    std::vector<BenchmarkCase> cases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto where = file.string() + ":" + std::to_string(line_no) + ": ";
        BenchmarkCase c;
        try {
            const auto j = nlohmann::json::parse(line);
            c.prompt = j.at("prompt").get<std::string>();
            const auto cat = case_category_from_string(j.at("category").get<std::string>());
            if (!cat) throw BenchmarkFormatError(where + "unknown category");
            c.category = *cat;
            for (const auto& p : j.at("expected_paths")) c.expected_paths.emplace_back(p.get<std::string>());
            c.expected_entry_ids = j.value("expected_entry_ids", std::vector<std::string>{});
        } catch (const nlohmann::json::exception& e) {
            throw BenchmarkFormatError(where + e.what());
        }
        if (c.expected_paths.empty()) throw BenchmarkFormatError(where + "expected_paths is empty");
        for (const auto& p : c.expected_paths) {
            try {
                parse_path(p, taxonomy);
            } catch (const Error& e) {
                throw BenchmarkFormatError(where + e.what());
            }
        }
        cases.push_back(std::move(c));
    }
    if (cases.empty()) throw BenchmarkFormatError("benchmark file " + file.string() + " has no cases");
    return cases;
}

SetMetrics set_metrics(const std::set<std::string>& predicted, const std::set<std::string>& expected) {
    if (expected.empty()) throw std::invalid_argument("set_metrics: expected set must be non-empty");
    std::size_t hits = 0;
    for (const auto& p : predicted) hits += expected.count(p);
    SetMetrics m;
    m.precision = predicted.empty() ? 1.0 : static_cast<double>(hits) / static_cast<double>(predicted.size());
    m.recall = static_cast<double>(hits) / static_cast<double>(expected.size());
    m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double accuracy(const std::vector<std::pair<std::set<std::string>, std::set<std::string>>>& outcomes) {
    if (outcomes.empty()) return 0.0;
    const auto correct = std::count_if(outcomes.begin(), outcomes.end(),
                                       [](const auto& o) { return o.first == o.second; });
    return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

std::map<std::size_t, double> topk_recall(const std::vector<AssetMetadata>& queries, const KnowledgeBase& kb,
                                          const TaxonomyConfig& taxonomy, const std::vector<std::size_t>& ks) {
    std::map<std::size_t, double> out;
    if (ks.empty()) return out;
    const std::size_t max_k = *std::max_element(ks.begin(), ks.end());
    std::map<std::size_t, std::size_t> hits;
    for (const auto& meta : queries) {
        const auto candidates = knowledge_candidates(format_path(meta, taxonomy), kb, taxonomy, max_k);
        std::size_t rank = 0;
        for (std::size_t r = 0; r < candidates.size(); ++r) {
            const auto* entry = kb.find_id(candidates[r].id);
            if (entry != nullptr && strict_match(*entry, meta)) {
                rank = r + 1;
                break;
            }
        }
        for (auto k : ks) {
            if (rank != 0 && rank <= k) ++hits[k];
        }
    }
    for (auto k : ks) {
        out[k] = queries.empty() ? 0.0 : static_cast<double>(hits[k]) / static_cast<double>(queries.size());
    }
    return out;
}

nlohmann::json MetricReport::to_json() const {
    nlohmann::json j;
    j["aggregation"] = kAggregation;
    j["case_count"] = cases.size();
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [cat, agg] : categories) {
        nlohmann::json c{{"count", agg.count}, {"accuracy", agg.accuracy}};
        if (agg.mean) {
            c.update(metrics_json(*agg.mean));
        } else {
            c["precision"] = nullptr;
            c["recall"] = nullptr;
            c["f1"] = nullptr;
        }
        cats[std::string(to_string(cat))] = c;
    }
    j["categories"] = cats;
    nlohmann::json topk_json = nlohmann::json::object();
    for (const auto& [k, v] : topk) topk_json[std::to_string(k)] = v;
    j["topk_recall"] = topk_json;
    j["codegen"] = {{"correct_paths", correct_paths},
                    {"domain_match", domain_match},
                    {"executability", executability ? nlohmann::json(*executability) : nlohmann::json()}};
    j["cases"] = nlohmann::json::array();
    for (const auto& c : cases) {
        nlohmann::json cj{{"index", c.index},
                          {"category", std::string(to_string(c.category))},
                          {"prompt", c.prompt},
                          {"predicted", c.predicted},
                          {"expected", c.expected},
                          {"correct", c.correct},
                          {"validation_passed", c.validation_passed},
                          {"correct_paths", c.correct_paths},
                          {"domain_match", c.domain_match}};
        if (c.category != CaseCategory::MultiGeneric) cj.update(metrics_json(c.metrics));
        if (!c.error.empty()) cj["error"] = c.error;
        if (c.executable) cj["executable"] = *c.executable;
        j["cases"].push_back(std::move(cj));
    }
    return j;
}

MetricReport run_benchmark(const std::vector<BenchmarkCase>& cases, Pipeline& pipeline,
                           const BenchmarkOptions& options) {
    MetricReport report;
    fs::path manifest;
    if (options.with_execution) {
        fs::create_directories(options.work_dir);
        manifest = options.work_dir / "paths.txt";
        std::string lines;
        for (const auto& p : enumerate_paths(pipeline.taxonomy())) lines += p.str() + "\n";
        write_file_atomic(manifest, lines);
    }

    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& bc = cases[i];
        CaseOutcome out;
        out.index = i;
        out.category = bc.category;
        out.prompt = bc.prompt;
        std::set<std::string> expected;
        for (const auto& p : bc.expected_paths) expected.insert(p.str());
        out.expected.assign(expected.begin(), expected.end());

        const auto stem = "case_" + std::to_string(i);
        Generation g;
        try {
            pipeline.generate_into(g, bc.prompt, stem + ".plan.json");
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        std::set<std::string> predicted;
        if (std::find(g.completed.begin(), g.completed.end(), "retrieval") != g.completed.end()) {
            for (const auto& p : g.retrieval.paths) predicted.insert(p.str());
        }
        out.predicted.assign(predicted.begin(), predicted.end());
        out.correct = out.error.empty() && predicted == expected;
        out.metrics = set_metrics(predicted, expected);

        if (std::find(g.completed.begin(), g.completed.end(), "validator") != g.completed.end()) {
            out.emitted = true;
            out.validation_passed = g.report.passed;
            out.correct_paths = !g.report.has_error("R1") && !g.report.has_error("R2");
            out.domain_match = !g.report.has_error("R4") && !g.report.has_error("R6");
            if (options.with_execution) {
                const auto script = options.work_dir / (stem + ".py");
                const auto dump = options.work_dir / (stem + ".dump.json");
                write_file_atomic(script, g.script.source);
                write_file_atomic(options.work_dir / (stem + ".plan.json"), g.plan.to_json().dump(2) + "\n");
                const auto cmd = shell_quote(options.runner) + " " + shell_quote(script.string()) +
                                 " --manifest " + shell_quote(manifest.string()) + " --dump " +
                                 shell_quote(dump.string()) + " >/dev/null 2>&1";
                out.executable = std::system(cmd.c_str()) == 0;
            }
        } else if (options.with_execution) {
            out.executable = false;
        }
        report.cases.push_back(std::move(out));
    }

    std::map<CaseCategory, std::vector<const CaseOutcome*>> by_cat;
    for (const auto& c : report.cases) by_cat[c.category].push_back(&c);
    for (const auto& [cat, list] : by_cat) {
        CategoryAggregate agg;
        agg.count = list.size();
        SetMetrics sum;
        std::size_t correct = 0;
        for (const auto* c : list) {
            correct += c->correct ? 1 : 0;
            sum.precision += c->metrics.precision;
            sum.recall += c->metrics.recall;
            sum.f1 += c->metrics.f1;
        }
        const auto n = static_cast<double>(list.size());
        agg.accuracy = static_cast<double>(correct) / n;
        if (cat != CaseCategory::MultiGeneric) agg.mean = SetMetrics{sum.precision / n, sum.recall / n, sum.f1 / n};
        report.categories[cat] = agg;
    }

    const auto n = static_cast<double>(report.cases.size());
    std::size_t paths_ok = 0, domain_ok = 0, exec_ok = 0;
    for (const auto& c : report.cases) {
        paths_ok += c.correct_paths ? 1 : 0;
        domain_ok += c.domain_match ? 1 : 0;
        exec_ok += c.executable.value_or(false) ? 1 : 0;
    }
    if (n > 0) {
        report.correct_paths = static_cast<double>(paths_ok) / n;
        report.domain_match = static_cast<double>(domain_ok) / n;
        if (options.with_execution) report.executability = static_cast<double>(exec_ok) / n;
    }

    const auto& kb = pipeline.knowledge_base();
    std::vector<AssetMetadata> queries;
    for (const auto& e : kb.entries()) queries.push_back(e.meta);
    report.topk = topk_recall(queries, kb, pipeline.taxonomy(), options.ks);
    return report;
}

}  // namespace sceneforge
