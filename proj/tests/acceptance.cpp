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

// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include "sceneforge/eval.hpp"
#include "sceneforge/pipeline.hpp"
#include "sceneforge/text.hpp"
#include "support/helpers.hpp"
#include "support/mutants.hpp"

using namespace sceneforge;
namespace t = sceneforge::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void run(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_s > 0 && s >= budget_s) {
        o.ok = false;
        o.detail += " over time budget";
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << " (" << static_cast<long>(s * 1000) << " ms) " << o.detail
              << "\n";
}

Outcome taxonomy_cardinality() {
    const auto& tax = t::default_taxonomy();
    const auto paths = enumerate_paths(tax);
    const std::set<AssetPath> unique(paths.begin(), paths.end());
    std::size_t round_trips = 0;
    for (const auto& p : paths) round_trips += format_path(parse_path(p, tax), tax) == p ? 1 : 0;
    return {paths.size() == 672 && unique.size() == 672 && round_trips == 672,
            std::to_string(unique.size()) + " unique, " + std::to_string(round_trips) + " round-trip"};
}

Outcome hybrid_zero_mismatch() {
    const auto& tax = t::default_taxonomy();
    const auto recipe = retrieve_entries(enumerate_paths(tax), t::default_kb(), tax);
    std::size_t strict = 0;
    for (const auto& l : recipe.lines) strict += strict_match(l.entry, parse_path(l.path, tax)) ? 1 : 0;

    const auto fx = t::adversarial_fixture();
    const KnowledgeBase kb(tax, fx.entries, std::make_shared<LocalEmbedder>());
    auto mismatched = [&](KbMode mode) {
        std::size_t n = 0;
        for (const auto& l : retrieve_entries(fx.queries, kb, tax, {.mode = mode}).lines) n += l.matched ? 0 : 1;
        return n;
    };
    const auto hybrid = mismatched(KbMode::Hybrid), rag = mismatched(KbMode::Rag);
    return {strict == 672 && recipe.fallbacks.empty() && hybrid == 0 && rag >= 1,
            std::to_string(strict) + " strict, " + std::to_string(recipe.fallbacks.size()) +
                " fallbacks; adversarial mismatches hybrid " + std::to_string(hybrid) + " rag " +
                std::to_string(rag)};
}

Outcome topk_coverage() {
    const auto& tax = t::default_taxonomy();
    const auto fx = t::adversarial_fixture();
    const KnowledgeBase kb(tax, fx.entries, std::make_shared<LocalEmbedder>());
    std::vector<AssetMetadata> metas;
    for (const auto& q : fx.queries) metas.push_back(parse_path(q, tax));
    const auto r = topk_recall(metas, kb, tax, {1, 2, 3});
    return {r.at(1) <= r.at(2) && r.at(2) <= r.at(3) && r.at(3) == 1.0,
            "top1 " + text::format_double(r.at(1)) + " top2 " + text::format_double(r.at(2)) + " top3 " +
                text::format_double(r.at(3))};
}

Outcome benchmark_targets() {
    const auto cases = load_benchmark(t::data_dir() / "benchmark.jsonl", t::default_taxonomy());
    Pipeline a(t::default_config());
    const auto first = run_benchmark(cases, a).to_json().dump(2);
    Pipeline b(t::default_config());
    const auto report = run_benchmark(cases, b);
    const auto second = report.to_json().dump(2);
    const double detailed = report.categories.at(CaseCategory::SingleDetailed).accuracy;
    const double generic = report.categories.at(CaseCategory::SingleGeneric).accuracy;
    return {detailed == 1.0 && generic >= 0.8 && first == second,
            "single_detailed " + text::format_double(detailed) + ", single_generic " + text::format_double(generic) +
                (first == second ? ", identical reports" : ", reports differ")};
}

Outcome metric_correctness() {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> size(0, 8), value(0, 11);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::set<std::string> p, e;
        for (int i = size(rng); i > 0; --i) p.insert(std::to_string(value(rng)));
        for (int i = 1 + size(rng); i > 0; --i) e.insert(std::to_string(value(rng)));
        int hits = 0;
        for (const auto& x : p) {
            for (const auto& y : e) hits += x == y ? 1 : 0;
        }
        const double pr = p.empty() ? 1.0 : double(hits) / double(p.size());
        const double rc = double(hits) / double(e.size());
        const double f1 = pr + rc == 0.0 ? 0.0 : 2 * pr * rc / (pr + rc);
        const auto m = set_metrics(p, e);
        if (std::abs(m.precision - pr) > 1e-9 || std::abs(m.recall - rc) > 1e-9 || std::abs(m.f1 - f1) > 1e-9) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " disagreements in 1000 pairs"};
}

Outcome planner_geometry() {
    std::mt19937_64 rng(77);
    const auto cfg = t::default_config().planner;
    double worst = 0.0;
    int overlaps = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto plan = plan_scene(t::random_recipe(rng, t::default_kb(), 4, 8), rng(), cfg);
        for (std::size_t n = 0; n < plan.fields.size(); ++n) {
            const auto& f = plan.fields[n];
            for (std::size_t k = 0; k < f.placements.size(); ++k) {
                const auto i = k / static_cast<std::size_t>(f.cols), j = k % static_cast<std::size_t>(f.cols);
                if (j > 0) {
                    worst = std::max(worst, std::abs(f.placements[k].position.x - f.placements[k - 1].position.x -
                                                     f.plant_spacing_m));
                }
                if (i > 0) {
                    const auto& above = f.placements[k - static_cast<std::size_t>(f.cols)];
                    worst = std::max(worst, std::abs(f.placements[k].position.y - above.position.y - f.row_spacing_m));
                }
            }
            for (std::size_t m = 0; m < n; ++m) overlaps += f.bbox.intersects(plan.fields[m].bbox) ? 1 : 0;
        }
    }
    return {worst <= 1e-9 && overlaps == 0,
            "max spacing error " + text::format_double(worst) + " m, " + std::to_string(overlaps) + " overlaps"};
}

Outcome validator_mutation() {
    std::mt19937_64 rng(5);
    const auto& tax = t::default_taxonomy();
    const auto cfg = t::default_config().planner;
    std::size_t mutants = 0, flagged = 0;
    int false_positives = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto recipe = t::random_recipe(rng, t::default_kb());
        const auto plan = plan_scene(recipe, rng(), cfg);
        const auto script = emit_script(plan);
        const auto report = validate(script, plan, tax, &recipe);
        if (!report.passed || !report.findings.empty()) ++false_positives;
        std::set<AssetPath> assets;
        for (const auto& f : plan.fields) assets.insert(f.asset);
        if (assets.size() < 2) continue;
        for (const auto& m : t::mutation_corpus(script, plan)) {
            ++mutants;
            flagged += validate({m.source, script.plan_ref}, plan, tax, &recipe).passed ? 0 : 1;
        }
    }
    return {mutants >= 12 && flagged == mutants && false_positives == 0,
            std::to_string(flagged) + "/" + std::to_string(mutants) + " mutants flagged, " +
                std::to_string(false_positives) + " false positives"};
}

Outcome determinism() {
    const std::string prompt = "Generate a healthy Pink Lady apple orchard in summer and a lettuce field.";
    const auto a = t::scratch_dir("acceptance-a"), b = t::scratch_dir("acceptance-b");
    for (const auto& dir : {a, b}) {
        const auto r = t::run_cli("--seed 3 generate " + t::shell_quote(prompt) + " --out " + t::shell_quote(dir.string()));
        if (r.exit_code != 0) return {false, "generate exited " + std::to_string(r.exit_code)};
    }
    int same = 0;
    for (const char* f : {"scene.py", "scene.plan.json", "scene.report.json"}) {
        same += fs::exists(a / f) && t::read_file(a / f) == t::read_file(b / f) ? 1 : 0;
    }
    return {same == 3, std::to_string(same) + "/3 files identical"};
}

}  // namespace

int main() {
    run("taxonomy_cardinality", 1.0, taxonomy_cardinality);
    run("hybrid_zero_mismatch", 10.0, hybrid_zero_mismatch);
    run("topk_monotonicity_coverage", 0, topk_coverage);
    run("benchmark_targets", 60.0, benchmark_targets);
    run("metric_correctness", 0, metric_correctness);
    run("planner_geometry", 10.0, planner_geometry);
    run("validator_mutation_suite", 10.0, validator_mutation);
    run("determinism", 0, determinism);
    return failures == 0 ? 0 : 1;
}
