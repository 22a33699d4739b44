#include <chrono>

#include "doctest.h"
#include "execbench/executor.hpp"

using namespace execbench;

TEST_CASE("builtin executor") {
  BuiltinExecutor ex;
  auto r = ex.run({"def f(a1):\n    a1.pop(0)\n    return a1\n", "f", "[4, 1, 3]", true});
  REQUIRE(r.ok());
  CHECK(r.output_repr == "[1, 3]");
  CHECK(r.covered_lines == std::set<int>{1, 2, 3});
  CHECK(ex.run({"def f(a:\n", "f", "1", true}).error_kind == "SyntaxError");
  CHECK(ex.run({"def f(a):\n    return a\n", "g", "1", true}).error_kind == "NameError");
  auto e = ex.run({"def f(a1):\n    return a1[3]\n", "f", "[1]", true});
  CHECK(e.status == ExecStatus::Error);
  CHECK(e.error_kind == "IndexError");
  CHECK(e.error_line == 2);
}

TEST_CASE("external executor protocol") {
  ExternalExecutor ex({"python3 fixtures/py_executor.py", 2});
  auto r = ex.run({"def f(s):\n    return 'b' + s + s + 'a'\n", "f", "s = 'hi'", true});
  REQUIRE(r.ok());
  CHECK(r.output_repr == "'bhihia'");
  CHECK(r.covered_lines == std::set<int>{1, 2});
  auto e = ex.run({"def f(d):\n    return d['x']\n", "f", "{}", true});
  CHECK(e.status == ExecStatus::Error);
  CHECK(e.error_kind == "KeyError");
}

TEST_CASE("external executor timeout and respawn") {
  ExternalOptions opts{"python3 fixtures/py_executor.py", 1, std::chrono::milliseconds(1500)};
  ExternalExecutor ex(opts);
  const auto start = std::chrono::steady_clock::now();
  auto r = ex.run({"import time\ndef f(a):\n    time.sleep(30)\n    return a\n", "f", "1", false});
  CHECK(r.status == ExecStatus::Timeout);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
  auto again = ex.run({"def f(a):\n    return a + 1\n", "f", "1", false});
  REQUIRE(again.ok());
  CHECK(again.output_repr == "2");
}

TEST_CASE("external executor that is not a protocol peer") {
  ExternalExecutor ex({"echo not-json", 1});
  auto r = ex.run({"def f(a):\n    return a\n", "f", "1", false});
  CHECK(r.status == ExecStatus::Protocol);
}
