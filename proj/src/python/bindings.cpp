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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sceneforge/eval.hpp"
#include "sceneforge/pipeline.hpp"

namespace py = pybind11;
using namespace sceneforge;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

struct PyPipeline {
    Pipeline pipeline;

    static PyPipeline make(const std::optional<std::filesystem::path>& config, std::optional<std::uint64_t> seed,
                           std::optional<int> rows, std::optional<int> cols, const std::string& frontend_mode,
                           const std::string& kb_mode) {
        PipelineOptions opts;
        opts.seed = seed;
        opts.rows = rows;
        opts.cols = cols;
        opts.frontend_mode = frontend_mode == "provider" ? FrontendMode::Provider : FrontendMode::Rules;
        opts.kb_mode = kb_mode == "rag" ? KbMode::Rag : KbMode::Hybrid;
        return {Pipeline(SceneforgeConfig::load(config.value_or(SceneforgeConfig::default_path())), opts)};
    }
};

py::dict generation_dict(const Generation& g) {
    py::dict d;
    d["prompt"] = g.prompt;
    d["paths"] = to_py(nlohmann::json(g.retrieval.to_json()["paths"]));
    d["recipe"] = to_py(g.recipe.to_json());
    d["plan"] = to_py(g.plan.to_json());
    d["script"] = g.script.source;
    d["report"] = to_py(g.report.to_json());
    d["passed"] = g.report.passed;
    d["warnings"] = g.warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "sceneforge prompt-to-scene compiler";

    static py::exception<Error> error(m, "SceneforgeError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const StageError& e) {
            PyErr_SetString(error.ptr(), ("[" + e.stage() + "] " + e.kind() + ": " + e.what()).c_str());
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), (e.kind() + ": " + e.what()).c_str());
        }
    });

    m.def("data_dir", &SceneforgeConfig::data_dir);
    m.def("default_config_path", &SceneforgeConfig::default_path);

    m.def("enumerate_paths", [] {
        std::vector<std::string> out;
        const auto tax = TaxonomyConfig::load(SceneforgeConfig::data_dir() / "taxonomy.json");
        for (const auto& p : enumerate_paths(tax)) out.push_back(p.str());
        return out;
    });
    m.def("parse_path", [](const std::string& path) {
        const auto tax = TaxonomyConfig::load(SceneforgeConfig::data_dir() / "taxonomy.json");
        return to_py(to_json(parse_path(path, tax)));
    });
    m.def("embed_local", [](const std::string& text, std::size_t dim) {
        const auto v = embed_local(text, dim);
        return std::vector<float>(v.values().begin(), v.values().end());
    }, py::arg("text"), py::arg("dimension") = kLocalEmbeddingDim);
    m.def("set_metrics", [](const std::set<std::string>& predicted, const std::set<std::string>& expected) {
        const auto s = set_metrics(predicted, expected);
        return py::make_tuple(s.precision, s.recall, s.f1);
    });
    m.def("validate", [](const std::string& script, const py::object& plan) {
        const auto tax = TaxonomyConfig::load(SceneforgeConfig::data_dir() / "taxonomy.json");
        return to_py(validate({script, ""}, ScenePlan::from_json(from_py(plan)), tax).to_json());
    }, py::arg("script"), py::arg("plan"));

    py::class_<PyPipeline>(m, "Pipeline")
        .def(py::init(&PyPipeline::make), py::arg("config") = py::none(), py::arg("seed") = py::none(),
             py::arg("rows") = py::none(), py::arg("cols") = py::none(), py::arg("frontend_mode") = "rules",
             py::arg("kb_mode") = "hybrid")
        .def("decompose", [](PyPipeline& self, const std::string& prompt) {
            py::list out;
            for (const auto& q : self.pipeline.decompose(prompt).subqueries) out.append(to_py(to_json(q)));
            return out;
        })
        .def("retrieve", [](PyPipeline& self, const std::string& prompt) {
            return to_py(self.pipeline.retrieve(self.pipeline.decompose(prompt)).to_json());
        })
        .def("generate", [](PyPipeline& self, const std::string& prompt) {
            return generation_dict(self.pipeline.generate(prompt));
        })
        .def("write", [](PyPipeline& self, const std::string& prompt, const std::filesystem::path& out_dir,
                         const std::string& name) {
            const auto g = self.pipeline.generate(prompt, name + ".plan.json");
            const auto files = self.pipeline.write_outputs(g, out_dir, name);
            py::dict d;
            d["script"] = files.script;
            d["plan"] = files.plan;
            d["report"] = files.report;
            d["manifest"] = files.manifest;
            d["passed"] = g.report.passed;
            return d;
        }, py::arg("prompt"), py::arg("out_dir"), py::arg("name") = "scene")
        .def("eval", [](PyPipeline& self, const std::optional<std::filesystem::path>& cases) {
            const auto file = cases.value_or(SceneforgeConfig::data_dir() / "benchmark.jsonl");
            return to_py(run_benchmark(load_benchmark(file, self.pipeline.taxonomy()), self.pipeline).to_json());
        }, py::arg("cases") = py::none());

}
