#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "execbench/datasets.hpp"
#include "execbench/mutate.hpp"

using namespace execbench;
using namespace execbench::mutate;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Mutant> of_kind(std::string_view src, Kind k) {
  std::vector<Mutant> out;
  for (auto& m : enumerate_mutants(src))
    if (m.site.kind == k) out.push_back(m);
  return out;
}

Survivor survivor(int line, std::size_t offset, std::set<int> covered) {
  Survivor s;
  s.mutant.source = "m" + std::to_string(line) + "_" + std::to_string(offset);
  s.mutant.site.line = line;
  s.mutant.site.offset = offset;
  s.response.status = ExecStatus::Ok;
  s.response.covered_lines = std::move(covered);
  return s;
}

Problem problem(std::string source, std::string input) {
  Problem p;
  p.id = "t";
  p.source = std::move(source);
  p.input = std::move(input);
  BuiltinExecutor ex;
  auto r = ex.run({p.source, p.function_name, p.input, true});
  REQUIRE(r.ok());
  p.output = r.output_repr;
  return p;
}

}  // namespace

TEST_CASE("one example per mutation kind") {
  const std::map<std::string, Kind> kinds = {{"arithmetic", Kind::Arithmetic},
                                             {"relational", Kind::Relational},
                                             {"logical", Kind::Logical},
                                             {"keyword", Kind::Keyword},
                                             {"numeric_literal", Kind::NumericLiteral}};
  for (const auto& [name, kind] : kinds) {
    CAPTURE(name);
    const auto original = slurp("golden/mutation_kinds/" + name + ".py");
    const auto expected = slurp("golden/mutation_kinds/" + name + ".mutant.py");
    auto ms = of_kind(original, kind);
    CHECK(std::any_of(ms.begin(), ms.end(), [&](const Mutant& m) { return m.source == expected; }));
    CHECK(kind_name(kind) == name);
    CHECK(single_span_difference(original, expected));
  }
}

TEST_CASE("mutation site enumeration") {
  CHECK(enumerate_mutants("def f(lst):\n    return lst\n").empty());
  const std::string src = "def f(x):\n    if x < 0:\n        return 1\n    return 2\n";
  auto rel = of_kind(src, Kind::Relational);
  CHECK(rel.size() == 5);
  std::set<std::string> repl;
  for (const auto& m : rel) repl.insert(m.site.replacement);
  CHECK(repl == std::set<std::string>{"<=", ">", ">=", "==", "!="});
  for (const auto& m : enumerate_mutants(src)) {
    CHECK(m.source != src);
    CHECK(single_span_difference(src, m.source));
  }
  // literal neighbours, including a negated literal
  auto lit = of_kind("def f(a):\n    return a[-1]\n", Kind::NumericLiteral);
  REQUIRE(lit.size() == 2);
  CHECK(lit[0].source == "def f(a):\n    return a[-2]\n");
  CHECK(lit[1].source == "def f(a):\n    return a[0]\n");
  // unary minus is not an arithmetic site; strings and comments are skipped
  CHECK(of_kind("def f(a):\n    return -a\n", Kind::Arithmetic).empty());
  CHECK(enumerate_mutants("def f(a):\n    return 'a + b'  # x < 1\n").empty());
  CHECK(of_kind("def f(a):\n    a += 1\n    return a\n", Kind::Arithmetic).size() == 4);
  CHECK_FALSE(single_span_difference("def f(a):\n    return a + b\n", "def f(a):\n    return a - c\n"));
}

TEST_CASE("filter on the paired input") {
  auto p = problem("def f(a, b):\n    return a + b\n", "2, 0");
  BuiltinExecutor ex;
  auto survivors = filter_valid(p, enumerate_mutants(p.source), ex);
  std::set<std::string> kept;
  for (const auto& s : survivors) kept.insert(s.mutant.site.replacement);
  CHECK_FALSE(kept.count("-"));   // 2 - 0 == 2 + 0
  CHECK_FALSE(kept.count("//"));  // division by zero
  CHECK_FALSE(kept.count("%"));
  CHECK(kept == std::set<std::string>{"*"});

  auto q = problem("def f(a1):\n    return a1[1]\n", "[4, 7]");
  auto qs = filter_valid(q, enumerate_mutants(q.source), ex);
  REQUIRE(qs.size() == 1);
  CHECK(qs[0].mutant.site.replacement == "0");  // a1[2] raises IndexError
}

TEST_CASE("survivors match a brute-force oracle") {
  BuiltinExecutor ex;
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"def f(a1):\n    v1 = []\n    for i in range(len(a1)):\n        if a1[i] > 2:\n            v1.append(a1[i])\n    return v1\n",
       "[1, 2, 3]"},
      {"def f(a1):\n    s = 0\n    for i in range(len(a1)):\n        if a1[i] % 2 == 0 and a1[i] > 1:\n            continue\n        s = s + a1[i] * 2\n    return s\n",
       "[1, 2, 3, 4]"},
      {"def f(a1, a2):\n    a2.pop(0)\n    a2.extend(a1)\n    return len(a2) >= 3\n", "[1], [5, 6]"},
  };
  for (const auto& [src, input] : cases) {
    auto p = problem(src, input);
    auto candidates = enumerate_mutants(src);
    std::vector<std::string> expected;
    for (const auto& m : candidates) {
      BuiltinExecutor fresh;
      auto r = fresh.run({m.source, "f", input, true});
      if (r.status == ExecStatus::Ok && r.output_repr != p.output) expected.push_back(m.source);
    }
    std::vector<std::string> got;
    for (const auto& s : filter_valid(p, candidates, ex)) got.push_back(s.mutant.source);
    CHECK(got == expected);
  }
}

TEST_CASE("jaccard selection") {
  CHECK(jaccard({1, 2, 3}, {1, 2}) == doctest::Approx(2.0 / 3.0));
  CHECK(jaccard({}, {}) == 1.0);
  CHECK(jaccard({1}, {2}) == 0.0);

  const std::set<int> orig{1, 2, 3};
  std::vector<Survivor> ss = {survivor(2, 10, {1, 2}), survivor(3, 20, {1, 2, 3}), survivor(1, 5, {1})};
  Rng rng(1);
  CHECK(select_mutant(orig, ss, rng) == 1);
  CHECK_THROWS(select_mutant(orig, {}, rng));
}

TEST_CASE("ties are drawn uniformly and independent of order") {
  const std::set<int> orig{1, 2, 3, 4};
  const std::vector<Survivor> ss = {survivor(2, 10, {1, 2, 3}), survivor(4, 30, {1}), survivor(3, 20, {1, 2, 4})};
  std::vector<Survivor> reversed(ss.rbegin(), ss.rend());
  int first = 0, second = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng a(seed), b(seed);
    const auto i = select_mutant(orig, ss, a);
    const auto j = select_mutant(orig, reversed, b);
    CHECK(ss[i].mutant.source == reversed[j].mutant.source);
    REQUIRE(i != 1);
    (i == 0 ? first : second)++;
  }
  CAPTURE(first);
  CHECK(first >= 40);
  CHECK(first <= 60);
  CHECK(first + second == 100);
}

TEST_CASE("dataset mutation") {
  BuiltinExecutor ex;
  auto plain = problem("def f(lst):\n    return lst\n", "[1]");
  auto arith = problem("def f(a, b):\n    return a + b\n", "2, 3");
  arith.id = "arith";
  auto wrong = arith;
  wrong.id = "wrong";
  wrong.output = "0";
  auto d = mutate_dataset({plain, arith, wrong}, ex, 7);
  REQUIRE(d.kept.size() == 1);
  CHECK(d.kept[0] == arith);
  CHECK(d.mutated[0].id == arith.id);
  REQUIRE(d.mutated[0].mutation);
  CHECK(d.mutated[0].mutation->kind == "arithmetic");
  CHECK(d.mutated[0].output != arith.output);
  CHECK(single_span_difference(arith.source, d.mutated[0].source));
  CHECK(d.dropped.size() == 2);

  auto again = mutate_dataset({wrong, arith, plain}, ex, 7);
  CHECK(again.mutated == d.mutated);
}

TEST_CASE("dsl-list drop rate is stable") {
  datasets::DslListConfig cfg;
  cfg.seed = 1;
  auto problems = datasets::build_dsl_list(cfg);
  REQUIRE(problems.size() == 300);
  BuiltinExecutor ex;
  auto d = mutate_dataset(problems, ex, 7);
  CHECK(d.kept.size() == 264);
  CHECK(d.dropped.size() == 36);
  for (std::size_t i = 0; i < d.kept.size(); ++i) {
    CHECK(d.kept[i].id == d.mutated[i].id);
    CHECK(single_span_difference(d.kept[i].source, d.mutated[i].source));
    CHECK_FALSE(same_output(d.kept[i].output, d.mutated[i].output));
  }
}
