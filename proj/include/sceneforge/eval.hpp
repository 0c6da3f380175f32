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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sceneforge/knowledge.hpp"
#include "sceneforge/taxonomy.hpp"

namespace sceneforge {

class Pipeline;

enum class CaseCategory { SingleDetailed, SingleGeneric, MultiGeneric };

std::string_view to_string(CaseCategory c);
std::optional<CaseCategory> case_category_from_string(std::string_view s);

struct BenchmarkCase {
    std::string prompt;
    CaseCategory category = CaseCategory::SingleDetailed;
    std::vector<AssetPath> expected_paths;
    std::vector<std::string> expected_entry_ids;
};

/// JSON-lines benchmark. Throws BenchmarkFormatError when the file is
/// empty or a line is malformed; expected paths must parse.
std::vector<BenchmarkCase> load_benchmark(const std::filesystem::path& file, const TaxonomyConfig& taxonomy);

struct SetMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// precision = |P∩E|/|P| (1 when P is empty), recall = |P∩E|/|E|,
/// f1 = harmonic mean (0 when both are 0). `expected` must be non-empty.
SetMetrics set_metrics(const std::set<std::string>& predicted, const std::set<std::string>& expected);

/// Fraction of (predicted, expected) pairs that are equal sets.
double accuracy(const std::vector<std::pair<std::set<std::string>, std::set<std::string>>>& outcomes);

/// For each k, the fraction of queries whose strict-matching entry is among
/// the first k semantic candidates (hybrid descriptor query, no filter).
std::map<std::size_t, double> topk_recall(const std::vector<AssetMetadata>& queries, const KnowledgeBase& kb,
                                          const TaxonomyConfig& taxonomy,
                                          const std::vector<std::size_t>& ks = {1, 2, 3});

struct CaseOutcome {
    std::size_t index = 0;
    CaseCategory category = CaseCategory::SingleDetailed;
    std::string prompt;
    std::vector<std::string> predicted;
    std::vector<std::string> expected;
    bool correct = false;
    SetMetrics metrics;
    std::string error;
    bool emitted = false;
    bool validation_passed = false;
    bool correct_paths = false;
    bool domain_match = false;
    std::optional<bool> executable;
};

struct CategoryAggregate {
    std::size_t count = 0;
    double accuracy = 0.0;
    /// Absent for multi-field cases.
    std::optional<SetMetrics> mean;
};

struct MetricReport {
    std::vector<CaseOutcome> cases;
    std::map<CaseCategory, CategoryAggregate> categories;
    std::map<std::size_t, double> topk;
    double correct_paths = 0.0;
    double domain_match = 0.0;
    std::optional<double> executability;

    /// Deterministic: no timings, sorted keys.
    nlohmann::json to_json() const;
};

struct BenchmarkOptions {
    std::vector<std::size_t> ks{1, 2, 3};
    /// Run each emitted script through `runner` (script --manifest --dump).
    bool with_execution = false;
    std::string runner = "mock-runner";
    std::filesystem::path work_dir;
};

/// Runs every case through the pipeline; per-case failures count as
/// incorrect and never abort the run.
MetricReport run_benchmark(const std::vector<BenchmarkCase>& cases, Pipeline& pipeline,
                           const BenchmarkOptions& options = {});

}  // namespace sceneforge
