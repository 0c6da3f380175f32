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

// Writes mock chat fixtures for a benchmark: one transcript record per
// prompt whose reply is the rule engine's decomposition, so provider-mode
// runs over the mock reproduce rules-mode results.

#include <iostream>

#include <CLI11.hpp>

#include "sceneforge/eval.hpp"
#include "sceneforge/pipeline.hpp"

using namespace sceneforge;

int main(int argc, char** argv) {
    CLI::App app{"Generate mock chat fixtures from the rule engine"};
    std::string config, cases, out;
    std::vector<std::string> extra;
    app.add_option("--config", config);
    app.add_option("--cases", cases)->required();
    app.add_option("--out", out)->required();
    app.add_option("--prompt", extra, "Additional prompts");
    CLI11_PARSE(app, argc, argv);
    try {
        auto cfg = SceneforgeConfig::load(config.empty() ? SceneforgeConfig::default_path() : std::filesystem::path(config));
        Pipeline pipeline(cfg);
        const auto& fe = pipeline.frontend();
        std::vector<std::string> prompts;
        for (const auto& c : load_benchmark(cases, pipeline.taxonomy())) prompts.push_back(c.prompt);
        prompts.insert(prompts.end(), extra.begin(), extra.end());
        std::filesystem::remove(out);
        auto transcript = Transcript::open_for_append(out);
        for (const auto& p : prompts) {
            const auto request = chat_request(cfg.chat.model, fe.provider_messages(p));
            const auto key = request_key(request);
            if (transcript->find(key)) continue;
            const auto reply = Frontend::provider_reply(fe.decompose_rules(p));
            transcript->append(key, "chat", request, reply);
        }
        std::cout << "wrote " << transcript->size() << " records to " << out << "\n";
    } catch (const std::exception& e) {
        std::cerr << "make_fixtures: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
