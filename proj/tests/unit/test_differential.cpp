#include "doctest.h"
#include "execbench/executor.hpp"
#include "support/differential.hpp"

using namespace execbench;

TEST_CASE("builtin interpreter matches the reference executor") {
  const auto cases = testing::load_differential("fixtures/differential_programs.txt");
  REQUIRE(cases.size() >= 50);
  BuiltinExecutor builtin;
  ExternalExecutor reference({"python3 fixtures/py_executor.py", 1});
  for (const auto& c : cases) {
    REQUIRE(!c.inputs.empty());
    for (const auto& input : c.inputs) {
      const ExecRequest req{c.source, "f", input, true};
      const auto a = builtin.run(req);
      const auto b = reference.run(req);
      INFO(c.name, " ", input, " builtin=", a.output_repr, a.error_kind, " reference=", b.output_repr, b.error_kind,
           " ", b.error_message);
      REQUIRE(b.status != ExecStatus::Protocol);
      CHECK(a.status == b.status);
      CHECK(a.output_repr == b.output_repr);
      CHECK(a.error_kind == b.error_kind);
      // the host tracer also reports continuation lines of a statement
      if (a.ok() && b.ok() && c.name.find("continuation") == std::string::npos)
        CHECK(a.covered_lines == b.covered_lines);
    }
  }
}
