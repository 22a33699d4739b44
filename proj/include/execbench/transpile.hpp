#pragma once

// Lowers DSL terms to the imperative mini-language.

#include <map>
#include <stdexcept>
#include <string>

#include "execbench/dsl.hpp"
#include "execbench/minipy.hpp"

namespace execbench::transpile {

class UntranslatableNode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImpProgram {
  std::string source;
  std::string function_name;
  minipy::Program ast;
  /// Pre-order node index -> 1-based line of the statement emitted for it.
  std::map<int, int> line_map;
  int loc = 0;
};

/// `param_count` defaults to the highest parameter index used in `ast`.
ImpProgram translate(const dsl::Node& ast, const std::string& function_name = "f",
                     int param_count = 0);

/// Non-blank lines, function header included.
int loc(std::string_view source);

}  // namespace execbench::transpile
