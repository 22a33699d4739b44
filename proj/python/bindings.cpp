#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "execbench/datasets.hpp"
#include "execbench/grammar.hpp"
#include "execbench/harness.hpp"
#include "execbench/mutate.hpp"
#include "execbench/transpile.hpp"
#include "execbench/version.hpp"

namespace py = pybind11;
using namespace execbench;

namespace {

py::dict problem_dict(const Problem& p) {
  py::dict d;
  d["id"] = p.id;
  d["dataset"] = p.dataset;
  d["source"] = p.source;
  d["function_name"] = p.function_name;
  d["input"] = p.input;
  d["output"] = p.output;
  d["loc"] = p.loc;
  d["program_id"] = p.program_id;
  d["dsl"] = p.dsl;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "execbench core bindings";
  m.attr("__version__") = std::string(kVersion);

  m.def("normalize", [](const std::string& text) { return dsl::to_text(dsl::parse_program(text)); }, py::arg("program"));
  m.def("depth", [](const std::string& text) { return dsl::parse_program(text).depth(); }, py::arg("program"));

  m.def(
      "translate",
      [](const std::string& text, int params) {
        auto p = transpile::translate(dsl::parse_program(text), "f", params);
        return py::make_tuple(p.source, p.loc);
      },
      py::arg("program"), py::arg("params") = 0, "Python source and LOC of a DSL program.");

  m.def(
      "sample_program",
      [](const std::string& signature, int depth, std::uint64_t seed) {
        grammar::SamplerConfig sc;
        sc.program_type = dsl::parse_type(signature);
        sc.max_depth = depth;
        const auto cfg = grammar::compile(dsl::list_dsl(), sc.constraints, sc.program_type, depth);
        Rng rng(seed);
        auto s = grammar::sample_valid_program(cfg, sc, rng);
        std::vector<std::string> inputs;
        for (const auto& in : s.inputs) inputs.push_back(grammar::input_text(in));
        py::dict d;
        d["program"] = dsl::to_text(s.ast);
        d["inputs"] = inputs;
        d["outputs"] = s.outputs;
        d["attempts"] = s.attempts;
        return d;
      },
      py::arg("signature") = "L(int) -> L(int)", py::arg("depth") = 4, py::arg("seed") = 0);

  m.def(
      "execute",
      [](const std::string& source, const std::string& input, const std::string& function_name) {
        BuiltinExecutor ex;
        auto r = ex.run({source, function_name, input, true});
        py::dict d;
        d["status"] = std::string(status_name(r.status));
        d["output"] = r.output_repr;
        d["covered_lines"] = r.covered_lines;
        d["error_kind"] = r.error_kind;
        d["steps"] = r.steps;
        return d;
      },
      py::arg("source"), py::arg("input"), py::arg("function_name") = "f");

  m.def(
      "mutants",
      [](const std::string& source) {
        py::list out;
        for (const auto& mu : mutate::enumerate_mutants(source)) {
          py::dict d;
          d["source"] = mu.source;
          d["kind"] = std::string(mutate::kind_name(mu.site.kind));
          d["line"] = mu.site.line;
          d["original"] = mu.site.original;
          d["replacement"] = mu.site.replacement;
          out.append(d);
        }
        return out;
      },
      py::arg("source"));

  m.def("jaccard", &mutate::jaccard, py::arg("a"), py::arg("b"));

  m.def(
      "build_dsl_list",
      [](std::uint64_t seed) {
        datasets::DslListConfig cfg;
        cfg.seed = seed;
        py::list out;
        for (const auto& p : datasets::build_dsl_list(cfg)) out.append(problem_dict(p));
        return out;
      },
      py::arg("seed") = 0);

  m.def(
      "prediction_prompt",
      [](const std::string& source, const std::string& input, const std::string& mode,
         const std::string& function_name) {
        Problem p;
        p.source = source;
        p.input = input;
        p.function_name = function_name;
        return harness::prediction_prompt(p, harness::parse_prompt_mode(mode));
      },
      py::arg("source"), py::arg("input"), py::arg("mode") = "zero-shot", py::arg("function_name") = "f");

  m.def(
      "extract_prediction",
      [](const std::string& response) -> std::optional<std::string> {
        auto v = harness::extract_prediction(response);
        if (!v) return std::nullopt;
        return pyliteral::repr(*v);
      },
      py::arg("response"));
}
