#pragma once

// Python literal values as they appear in inputs, ground-truth outputs and
// model answers: parsing, canonical repr and strict structural equality.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace execbench::pyliteral {

enum class Kind { None, Bool, Int, Float, Str, List, Tuple, Set, Dict };

struct Literal {
  Kind kind = Kind::None;
  bool boolean = false;
  std::string integer;  // normalized decimal, "-" prefix when negative
  double real = 0.0;
  std::string str;
  std::vector<Literal> items;  // Dict: k0, v0, k1, v1, ...

  static Literal none() { return {}; }
  static Literal from_bool(bool b);
  static Literal from_int(std::int64_t i);
  static Literal from_str(std::string s);
  static Literal list(std::vector<Literal> xs);

  std::optional<std::int64_t> as_int64() const;
  bool contains_float() const;
};

/// Parses exactly one literal; nullopt on anything else (calls, names,
/// arithmetic, trailing text).
std::optional<Literal> parse(std::string_view text);

struct Argument {
  std::string name;  // empty for positional
  Literal value;
};

/// Parses a call argument list such as `[1, 2], 3` or `nums = [1], k = 2`.
std::optional<std::vector<Argument>> parse_arguments(std::string_view text);

/// Python repr().
std::string repr(const Literal& v);

/// Structural equality. Bool is never equal to Int, list never equal to
/// tuple; dict and set compare as unordered collections.
bool equal(const Literal& a, const Literal& b);

/// Splits `text` at commas that are not nested in brackets or strings.
std::vector<std::string> split_top_level(std::string_view text, char sep = ',');

}  // namespace execbench::pyliteral
