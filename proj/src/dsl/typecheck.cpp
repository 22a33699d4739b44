#include <map>

#include "execbench/dsl.hpp"

namespace execbench::dsl {

TypeMismatch::TypeMismatch(std::string node_, Type expected_, Type found_)
    : std::runtime_error("type mismatch at " + node_ + ": expected " + expected_.str() +
                         ", found " + found_.str()),
      node(std::move(node_)),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

namespace {

// First-order unification over fresh type variables.
class Inference {
 public:
  explicit Inference(const std::vector<Type>& params) : params_(params) {}

  Type infer(const Node& n, bool function_slot) {
    switch (n.kind) {
      case NodeKind::Literal:
        if (function_slot) mismatch(n, Type::Arrow(Type::Var(0), Type::Var(1)), Type::Int());
        return Type::Int();
      case NodeKind::Param: {
        if (n.value < 1 || n.value > static_cast<int>(params_.size()))
          throw TypeMismatch(to_text(n), Type::Var(0), Type::Var(0));
        const Type& t = params_[n.value - 1];
        if (function_slot) mismatch(n, Type::Arrow(Type::Var(0), Type::Var(1)), t);
        return t;
      }
      case NodeKind::Prim: break;
    }

    const auto& pi = info(n.prim);
    const int given = static_cast<int>(n.children.size());
    const bool partial = given < pi.arity;
    if (partial && !(function_slot && given == pi.arity - 1))
      throw TypeMismatch(to_text(n), arrow_result(pi.signature), pi.signature);

    std::map<int, int> renaming;
    Type sig = instantiate(pi.signature, renaming);
    std::vector<Type> args = arrow_args(sig);
    Type result = arrow_result(sig);

    for (int i = 0; i < given; ++i) {
      const bool slot = n.prim == Prim::Map && i == 0;
      Type found = infer(n.children[i], slot);
      unify(args[i], found, n.children[i]);
    }
    if (partial) {
      Type t = Type::Arrow(args.back(), result);
      return t;
    }
    if (function_slot) mismatch(n, Type::Arrow(Type::Var(0), Type::Var(1)), resolve(result));
    return result;
  }

  Type resolve(const Type& t) const {
    if (t.kind == TypeKind::Var) {
      auto it = subst_.find(t.var);
      if (it != subst_.end()) return resolve(it->second);
      return t;
    }
    Type out = t;
    for (auto& a : out.args) a = resolve(a);
    return out;
  }

 private:
  Type instantiate(const Type& t, std::map<int, int>& renaming) {
    if (t.kind == TypeKind::Var) {
      auto [it, fresh] = renaming.try_emplace(t.var, next_);
      if (fresh) ++next_;
      return Type::Var(it->second);
    }
    Type out = t;
    for (auto& a : out.args) a = instantiate(a, renaming);
    return out;
  }

  bool occurs(int v, const Type& t) const {
    Type r = resolve(t);
    if (r.kind == TypeKind::Var) return r.var == v;
    for (const auto& a : r.args)
      if (occurs(v, a)) return true;
    return false;
  }

  void unify(const Type& expected, const Type& found, const Node& where) {
    Type a = resolve(expected), b = resolve(found);
    if (a.kind == TypeKind::Var && b.kind == TypeKind::Var && a.var == b.var) return;
    if (a.kind == TypeKind::Var) {
      if (occurs(a.var, b)) mismatch(where, a, b);
      subst_[a.var] = b;
      return;
    }
    if (b.kind == TypeKind::Var) {
      if (occurs(b.var, a)) mismatch(where, a, b);
      subst_[b.var] = a;
      return;
    }
    if (a.kind != b.kind || a.args.size() != b.args.size()) mismatch(where, a, b);
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      try {
        unify(a.args[i], b.args[i], where);
      } catch (const TypeMismatch&) {
        mismatch(where, a, b);
      }
    }
  }

  [[noreturn]] void mismatch(const Node& where, const Type& expected, const Type& found) {
    throw TypeMismatch(to_text(where), resolve(expected), resolve(found));
  }

  const std::vector<Type>& params_;
  std::map<int, Type> subst_;
  int next_ = 100;
};

Type normalize_vars(const Type& t, std::map<int, int>& names) {
  if (t.kind == TypeKind::Var) {
    auto [it, fresh] = names.try_emplace(t.var, static_cast<int>(names.size()));
    return Type::Var(it->second);
  }
  Type out = t;
  for (auto& a : out.args) a = normalize_vars(a, names);
  return out;
}

}  // namespace

Type typecheck(const Node& ast, const std::vector<Type>& param_types) {
  Inference inf(param_types);
  Type t = inf.resolve(inf.infer(ast, false));
  std::map<int, int> names;
  return normalize_vars(t, names);
}

}  // namespace execbench::dsl
