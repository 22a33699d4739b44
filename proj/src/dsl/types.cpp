#include "execbench/dsl.hpp"

#include <cctype>

namespace execbench::dsl {

Type Type::Arrows(const std::vector<Type>& chain) {
  if (chain.empty()) throw std::invalid_argument("empty arrow chain");
  Type t = chain.back();
  for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) t = Arrow(*it, std::move(t));
  return t;
}

bool Type::ground() const {
  if (kind == TypeKind::Var) return false;
  for (const auto& a : args)
    if (!a.ground()) return false;
  return true;
}

std::string Type::str() const {
  switch (kind) {
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::Var: return "t" + std::to_string(var);
    case TypeKind::List: return "L(" + elem().str() + ")";
    case TypeKind::Arrow: {
      std::string lhs = from().str();
      if (from().is_arrow()) lhs = "(" + lhs + ")";
      return lhs + " -> " + to().str();
    }
  }
  return "?";
}

std::vector<Type> arrow_args(const Type& t) {
  std::vector<Type> out;
  const Type* cur = &t;
  while (cur->is_arrow()) {
    out.push_back(cur->from());
    cur = &cur->to();
  }
  return out;
}

Type arrow_result(const Type& t) {
  const Type* cur = &t;
  while (cur->is_arrow()) cur = &cur->to();
  return *cur;
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  Type parse() {
    Type t = arrow();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  Type arrow() {
    Type lhs = atom();
    skip();
    if (s_.substr(pos_, 2) == "->" || s_.substr(pos_, 3) == "\xe2\x86\x92") {
      pos_ += s_.substr(pos_, 2) == "->" ? 2 : 3;
      return Type::Arrow(std::move(lhs), arrow());
    }
    return lhs;
  }

  Type atom() {
    skip();
    if (eat("(")) {
      Type t = arrow();
      expect(")");
      return t;
    }
    if (eat("int")) return Type::Int();
    if (eat("bool")) return Type::Bool();
    if (eat("List(") || eat("L(")) {
      Type t = arrow();
      expect(")");
      return Type::List(std::move(t));
    }
    if (pos_ < s_.size() && s_[pos_] == 't') {
      ++pos_;
      int v = 0;
      bool any = false;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + (s_[pos_++] - '0');
        any = true;
      }
      if (!any) fail("bad type variable");
      return Type::Var(v);
    }
    fail("unexpected token");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("type '" + std::string(s_) + "': " + why + " at " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Type parse_type(std::string_view text) { return TypeParser(text).parse(); }

const std::array<PrimInfo, kPrimCount>& primitives() {
  static const std::array<PrimInfo, kPrimCount> table = [] {
    const Type t0 = Type::Var(0), t1 = Type::Var(1);
    const Type I = Type::Int(), B = Type::Bool();
    const Type L0 = Type::List(t0), L1 = Type::List(t1);
    return std::array<PrimInfo, kPrimCount>{{
        {Prim::If, "if", Type::Arrows({B, t0, t0, t0}), 3, true, 5.0},
        {Prim::Map, "map", Type::Arrows({Type::Arrow(t0, t1), L0, L1}), 2, false, 5.0},
        {Prim::Empty, "empty", L0, 0, false, 1.0},
        {Prim::Append, "append", Type::Arrows({t0, L0, L0}), 2, true, 1.0},
        {Prim::Extend, "extend", Type::Arrows({L0, L0, L0}), 2, true, 0.05},
        {Prim::Init, "init", Type::Arrows({L0, L0}), 1, true, 1.0},
        {Prim::Tail, "tail", Type::Arrows({L0, L0}), 1, true, 1.0},
        {Prim::Length, "length", Type::Arrows({L0, I}), 1, false, 1.0},
        {Prim::Index, "index", Type::Arrows({I, L0, t0}), 2, false, 1.0},
        {Prim::Eq, "==", Type::Arrows({I, I, B}), 2, false, 1.0},
        {Prim::Lt, "<", Type::Arrows({I, I, B}), 2, false, 1.0},
        {Prim::Gt, ">", Type::Arrows({I, I, B}), 2, false, 1.0},
        {Prim::And, "&&", Type::Arrows({B, B, B}), 2, false, 1.0},
        {Prim::Or, "||", Type::Arrows({B, B, B}), 2, false, 1.0},
        {Prim::Not, "!", Type::Arrows({B, B}), 1, false, 1.0},
    }};
  }();
  return table;
}

const PrimInfo& info(Prim p) { return primitives()[static_cast<std::size_t>(p)]; }

std::optional<Prim> prim_from_name(std::string_view name) {
  for (const auto& p : primitives())
    if (p.name == name) return p.prim;
  return std::nullopt;
}

ListDsl list_dsl() {
  ListDsl dsl;
  for (const auto& p : primitives()) dsl.primitives.push_back(p.prim);
  for (int v = kMinLiteral; v <= kMaxLiteral; ++v) dsl.literals.push_back(v);
  return dsl;
}

}  // namespace execbench::dsl
