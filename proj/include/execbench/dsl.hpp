#pragma once

// Typed list-processing DSL: types, primitives, terms, typechecking and
// the syntactic constraint rules used by the sampler.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace execbench::dsl {

enum class TypeKind { Int, Bool, List, Var, Arrow };

struct Type {
  TypeKind kind = TypeKind::Int;
  int var = -1;              // Var index (0 => t0, 1 => t1, >=2 fresh)
  std::vector<Type> args;    // List: [elem]; Arrow: [from, to]

  static Type Int() { return {TypeKind::Int, -1, {}}; }
  static Type Bool() { return {TypeKind::Bool, -1, {}}; }
  static Type List(Type elem) { return {TypeKind::List, -1, {std::move(elem)}}; }
  static Type Var(int v) { return {TypeKind::Var, v, {}}; }
  static Type Arrow(Type from, Type to) {
    return {TypeKind::Arrow, -1, {std::move(from), std::move(to)}};
  }
  /// Right-associated arrow chain: arrows({a, b, c}) == a -> (b -> c).
  static Type Arrows(const std::vector<Type>& chain);

  bool is_list() const { return kind == TypeKind::List; }
  bool is_arrow() const { return kind == TypeKind::Arrow; }
  const Type& elem() const { return args.at(0); }
  const Type& from() const { return args.at(0); }
  const Type& to() const { return args.at(1); }

  bool ground() const;
  std::string str() const;

  friend bool operator==(const Type&, const Type&) = default;
  friend auto operator<=>(const Type& a, const Type& b) { return a.str() <=> b.str(); }
};

/// Parses "int", "bool", "L(int)", "t0", "L(int) -> L(int) -> L(int)".
Type parse_type(std::string_view text);

/// Splits an arrow chain into argument types and final codomain.
std::vector<Type> arrow_args(const Type& t);
Type arrow_result(const Type& t);

enum class Prim : std::uint8_t {
  If, Map, Empty, Append, Extend, Init, Tail, Length, Index, Eq, Lt, Gt, And, Or, Not
};
inline constexpr int kPrimCount = 15;

struct PrimInfo {
  Prim prim;
  std::string_view name;   // s-expression head
  Type signature;          // over Var(0)/Var(1)
  int arity;
  bool statement;          // translated to an imperative statement
  double default_weight;
};

const PrimInfo& info(Prim p);
const std::array<PrimInfo, kPrimCount>& primitives();
std::optional<Prim> prim_from_name(std::string_view name);

inline constexpr int kMinLiteral = -1;
inline constexpr int kMaxLiteral = 5;

enum class NodeKind : std::uint8_t { Prim, Literal, Param };

/// A DSL term. A Prim node with fewer children than its arity is partial,
/// which is only legal as the function argument of map.
struct Node {
  NodeKind kind = NodeKind::Literal;
  Prim prim = Prim::Empty;
  int value = 0;   // literal value, or 1-based parameter index
  std::vector<Node> children;

  static Node literal(int v) { return {NodeKind::Literal, Prim::Empty, v, {}}; }
  static Node param(int index) { return {NodeKind::Param, Prim::Empty, index, {}}; }
  static Node make(Prim p, std::vector<Node> kids = {}) {
    return {NodeKind::Prim, p, 0, std::move(kids)};
  }

  bool is_prim(Prim p) const { return kind == NodeKind::Prim && prim == p; }
  bool partial() const {
    return kind == NodeKind::Prim && static_cast<int>(children.size()) < info(prim).arity;
  }
  /// Longest root-to-leaf path counted in nodes.
  int depth() const;
  int size() const;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Parenthesized text form: `(map (length) a1)`, `empty`, `(index -1 a1)`.
std::string to_text(const Node& n);
Node parse_program(std::string_view text);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TypeMismatch : public std::runtime_error {
 public:
  TypeMismatch(std::string node, Type expected, Type found);
  std::string node;
  Type expected;
  Type found;
};

/// The whole list DSL: primitive table plus the literal pool.
struct ListDsl {
  std::vector<Prim> primitives;
  std::vector<int> literals;  // -1..5
};
ListDsl list_dsl();

/// Infers the type of `ast` given parameter types (a1 => param_types[0]).
/// Type variables left unconstrained are reported as t0, t1, ...
Type typecheck(const Node& ast, const std::vector<Type>& param_types);

enum class Rule : std::uint8_t { C1, C2, C3, C4, S1, S2, S3, S4 };
std::string_view rule_name(Rule r);

struct ConstraintSet {
  std::array<bool, 8> enabled{true, true, true, true, true, true, true, true};
  bool on(Rule r) const { return enabled[static_cast<int>(r)]; }
  void set(Rule r, bool v) { enabled[static_cast<int>(r)] = v; }
};

enum class Phase { Compile, Sample, All };

struct Violation {
  Rule rule;
  std::string where;  // text of the offending subterm
};

std::vector<Violation> check_constraints(const Node& ast, Phase phase, int param_count,
                                         const ConstraintSet& rules = {});

}  // namespace execbench::dsl
