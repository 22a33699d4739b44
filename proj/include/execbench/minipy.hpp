#pragma once

// A small imperative language with Python surface syntax: a single function
// over ints, bools and lists. Parsed into an AST and run by a tree-walking
// interpreter that records which source lines executed.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "execbench/pyliteral.hpp"

namespace execbench::minipy {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

enum class ExprKind { Int, Bool, None, Name, List, Unary, Binary, BoolOp, Compare, Subscript, Call, Method };

struct Expr {
  ExprKind kind = ExprKind::None;
  int line = 0;
  std::int64_t ival = 0;
  bool bval = false;
  std::string name;              // Name / Call callee / Method name
  std::string op;                // Unary: "-" | "not"; Binary: + - * // %; BoolOp: and | or
  std::vector<std::string> ops;  // Compare chain operators
  std::vector<Expr> kids;        // operands; Method: receiver first
};

enum class StmtKind { Assign, Expr, If, For, While, Break, Continue, Return };

struct Stmt {
  StmtKind kind = StmtKind::Expr;
  int line = 0;
  std::vector<Expr> targets;  // Assign: Name or Subscript; several => tuple assignment
  std::vector<Expr> values;   // Assign RHS items; Expr; Return (0 or 1); If: branch conditions;
                              // For: range() arguments; While: condition
  std::string var;            // For loop variable
  std::vector<std::vector<Stmt>> bodies;  // If: one per condition (+ else); loops: [body]
  bool has_else = false;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;
  int line = 1;
};

struct Program {
  Function fn;
  int line_count = 0;

  /// Number of statements including the function definition itself.
  int statement_count() const;
};

Program parse(std::string_view source);

struct Value;
using ListRef = std::shared_ptr<std::vector<Value>>;

struct Value {
  std::variant<std::monostate, std::int64_t, bool, ListRef> v;

  static Value none() { return {}; }
  static Value integer(std::int64_t i) { return {i}; }
  static Value boolean(bool b) { return {b}; }
  static Value list(std::vector<Value> xs) { return {std::make_shared<std::vector<Value>>(std::move(xs))}; }

  bool is_none() const { return std::holds_alternative<std::monostate>(v); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_list() const { return std::holds_alternative<ListRef>(v); }
};

/// Canonical representation: `[1, 2]`, `True`, `None`.
std::string repr(const Value& v);
/// Deep structural equality; Bool never equals Int.
bool structurally_equal(const Value& a, const Value& b);
/// Converts a parsed literal (ints, bools, None, lists) into a runtime value.
std::optional<Value> from_literal(const pyliteral::Literal& lit);

enum class ErrorKind {
  None,
  IndexOutOfRange,
  PopFromEmpty,
  PopIndexOutOfRange,
  ZeroDivision,
  Overflow,
  Type,
  Name,
  ValueError,
  StepLimitExceeded,
  ListTooLong,
};

std::string_view error_name(ErrorKind k);
/// Name of the exception class the host language would raise.
std::string_view python_exception(ErrorKind k);

struct Limits {
  std::uint64_t max_steps = 1'000'000;
  std::size_t max_list_len = 100'000;
};

struct ExecResult {
  ErrorKind error = ErrorKind::None;
  int error_line = 0;
  std::string message;
  Value output;
  std::set<int> covered_lines;
  std::uint64_t steps = 0;

  bool ok() const { return error == ErrorKind::None; }
};

/// Calls the program's function with `args`. Arguments are deep-copied.
ExecResult interpret(const Program& program, const std::vector<Value>& args,
                     const Limits& limits = {});

/// Convenience: parses `arguments` (literal call-argument text, positional or
/// keyword) and calls the function.
ExecResult interpret_text(const Program& program, std::string_view arguments,
                          const Limits& limits = {});

}  // namespace execbench::minipy
