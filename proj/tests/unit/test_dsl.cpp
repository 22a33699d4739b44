#include "doctest.h"
#include "execbench/dsl.hpp"
#include "execbench/dsl_eval.hpp"
#include "execbench/minipy.hpp"
#include "execbench/transpile.hpp"

using namespace execbench;
using namespace execbench::dsl;

namespace {

bool violates(const std::string& text, Rule rule, int params = 1) {
  for (const auto& v : check_constraints(parse_program(text), Phase::All, params))
    if (v.rule == rule) return true;
  return false;
}

std::string run(const std::string& text, std::vector<std::vector<std::int64_t>> args) {
  std::vector<Value> in;
  for (const auto& a : args) in.push_back(Value::int_list(a));
  auto r = eval_dsl(parse_program(text), in);
  return r.ok() ? r.output : "error";
}

}  // namespace

TEST_CASE("primitive table") {
  const auto& prims = primitives();
  CHECK(prims.size() == 15);
  CHECK(info(Prim::Append).signature.str() == "t0 -> L(t0) -> L(t0)");
  CHECK(info(Prim::Map).signature == parse_type("(t0 -> t1) -> L(t0) -> L(t1)"));
  CHECK(info(Prim::If).default_weight == 5);
  CHECK(info(Prim::Map).default_weight == 5);
  CHECK(info(Prim::Extend).default_weight == doctest::Approx(0.05));
  for (const auto& p : prims) {
    CHECK(p.signature.str().find("float") == std::string::npos);
    if (p.prim != Prim::If && p.prim != Prim::Map && p.prim != Prim::Extend) CHECK(p.default_weight == 1);
  }
  const auto dsl = list_dsl();
  CHECK(dsl.literals == std::vector<int>{-1, 0, 1, 2, 3, 4, 5});
}

TEST_CASE("s-expression round trip") {
  for (const char* text : {"(map (length) a1)", "empty", "(index -1 a1)", "(if (> (length a1) 2) a1 (tail a1))",
                           "(extend a1 (map (append 3) (append a2 empty)))"})
    CHECK(to_text(parse_program(text)) == text);
  CHECK_THROWS_AS(parse_program("(map (length) a1"), ParseError);
  CHECK_THROWS_AS(parse_program("(frobnicate a1)"), ParseError);
  CHECK_THROWS_AS(parse_program("(index 7 a1)"), ParseError);
}

TEST_CASE("depth counts nodes") {
  CHECK(parse_program("a1").depth() == 1);
  CHECK(parse_program("(tail a1)").depth() == 2);
  CHECK(parse_program("(map (length) a1)").depth() == 2);
  CHECK(parse_program("(append (length a1) a1)").depth() == 3);
}

TEST_CASE("typecheck") {
  const Type li = parse_type("L(int)");
  CHECK(typecheck(parse_program("(length a1)"), {li}) == Type::Int());
  CHECK_THROWS_AS(typecheck(parse_program("(index a1 a1)"), {li}), TypeMismatch);
  CHECK(typecheck(parse_program("(map (length) a1)"), {parse_type("L(L(int))")}) == li);
  CHECK(typecheck(parse_program("(map (== 2) a1)"), {li}) == parse_type("L(bool)"));
  CHECK(typecheck(parse_program("empty"), {}).str() == "L(t0)");
  CHECK_THROWS_AS(typecheck(parse_program("(&& (length a1) (! (== a1 a1)))"), {li}), TypeMismatch);
}

TEST_CASE("compile-time rules") {
  CHECK(violates("(== 0 0)", Rule::C1, 0));
  CHECK(violates("(< 2 (length a1))", Rule::C1));
  CHECK_FALSE(violates("(< (length a1) 2)", Rule::C1));
  CHECK(violates("(extend a1 empty)", Rule::C2));
  CHECK(violates("(length empty)", Rule::C2, 0));
  CHECK(violates("(map (length) empty)", Rule::C2, 0));
  CHECK_FALSE(violates("(extend empty a1)", Rule::C2));
  CHECK(violates("(append -1 a1)", Rule::C3));
  CHECK_FALSE(violates("(index -1 a1)", Rule::C3));
  CHECK(violates("(tail empty)", Rule::C4, 0));
  CHECK(violates("(init empty)", Rule::C4, 0));
  CHECK(violates("(index 0 empty)", Rule::C4, 0));
}

TEST_CASE("sample-time rules") {
  CHECK(violates("(== (length a1) (length a1))", Rule::S1));
  CHECK(violates("(&& (== a1 a1) (< (length a1) 2))", Rule::S1));
  CHECK(violates("(extend a1 a1)", Rule::S2));
  CHECK(violates("(if (== (length a1) 2) a1 a1)", Rule::S3));
  CHECK(violates("(tail a1)", Rule::S4, 2));
  CHECK_FALSE(violates("(extend a1 a2)", Rule::S4, 2));
  CHECK(check_constraints(parse_program("(extend a1 a2)"), Phase::All, 2).empty());
}

TEST_CASE("rules are toggleable") {
  ConstraintSet rules;
  rules.set(Rule::S2, false);
  CHECK(check_constraints(parse_program("(extend a1 a1)"), Phase::All, 1, rules).empty());
}

TEST_CASE("reference evaluator") {
  CHECK(run("(tail a1)", {{4, 1, 3}}) == "[1, 3]");
  CHECK(run("(index -1 a1)", {{2, 5}}) == "5");
  CHECK(run("(init a1)", {{2, 5}}) == "[2]");
  CHECK(run("(append (length a1) a1)", {{7, 8}}) == "[7, 8, 2]");
  CHECK(run("(map (> 2) a1)", {{1, 3}}) == "[True, False]");
  CHECK(run("(index 5 a1)", {{1}}) == "error");
  CHECK(run("(tail (tail a1))", {{1}}) == "error");
  // the tail statement runs before the condition is read, so length is 1
  CHECK(run("(if (> (length a1) 2) a1 (tail a1))", {{1, 2}}) == "[2]");
  CHECK(run("(if (> (length a1) 2) a1 (tail a1))", {{1, 2, 3, 4}}) == "[2, 3, 4]");
}

TEST_CASE("strict if agrees with the translation") {
  const auto ast = parse_program("(if (> (length a1) 2) a1 (tail a1))");
  const auto prog = transpile::translate(ast);
  for (std::vector<std::int64_t> xs : {std::vector<std::int64_t>{1, 2}, {1, 2, 3, 4}, {5}}) {
    std::vector<minipy::Value> items;
    for (auto x : xs) items.push_back(minipy::Value::integer(x));
    auto r = minipy::interpret(prog.ast, {minipy::Value::list(items)});
    auto e = eval_dsl(ast, {Value::int_list(xs)});
    REQUIRE(r.ok() == e.ok());
    if (r.ok()) CHECK(minipy::repr(r.output) == e.output);
  }
}
