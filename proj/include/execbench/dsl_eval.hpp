#pragma once

// Reference evaluator for DSL terms. Lists are shared mutable stores and
// statement primitives (append/extend/init/tail/if) run in post-order, so the
// result matches executing the imperative translation of the same term.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "execbench/dsl.hpp"

namespace execbench::dsl {

struct Value;
using ListRef = std::shared_ptr<std::vector<Value>>;

struct Value {
  std::variant<std::int64_t, bool, ListRef> v;

  static Value integer(std::int64_t i) { return {i}; }
  static Value boolean(bool b) { return {b}; }
  static Value list(std::vector<Value> items) {
    return {std::make_shared<std::vector<Value>>(std::move(items))};
  }
  static Value int_list(const std::vector<std::int64_t>& xs);

  /// Python-style repr: `[1, 2]`, `True`.
  std::string repr() const;
  /// Deep copy (no shared stores with the original).
  Value clone() const;
};

enum class EvalError { None, IndexOutOfRange, PopFromEmpty };

struct EvalOutcome {
  EvalError error = EvalError::None;
  std::string output;  // repr when error == None

  bool ok() const { return error == EvalError::None; }
};

/// Evaluates `ast` on fresh copies of `inputs` (one per parameter).
EvalOutcome eval_dsl(const Node& ast, const std::vector<Value>& inputs);

}  // namespace execbench::dsl
