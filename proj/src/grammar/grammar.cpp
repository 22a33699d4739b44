#include "execbench/grammar.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "execbench/minipy.hpp"
#include "execbench/transpile.hpp"

namespace execbench::grammar {

using dsl::Node;
using dsl::NodeKind;
using dsl::Prim;
using dsl::Rule;
using dsl::Type;
using dsl::TypeKind;

namespace {

constexpr Count kCountMax = ~Count{0};

Count sat_add(Count a, Count b) { return a > kCountMax - b ? kCountMax : a + b; }
Count sat_mul(Count a, Count b) {
  if (a == 0 || b == 0) return 0;
  return a > kCountMax / b ? kCountMax : a * b;
}

Type subst(const Type& t, const std::vector<Type>& binding) {
  if (t.kind == TypeKind::Var) return binding.at(static_cast<std::size_t>(t.var));
  Type out = t;
  for (auto& a : out.args) a = subst(a, binding);
  return out;
}

int max_var(const Type& t) {
  int m = t.kind == TypeKind::Var ? t.var : -1;
  for (const auto& a : t.args) m = std::max(m, max_var(a));
  return m;
}

// Ground instantiations of the signature's type variables.
std::vector<std::vector<Type>> bindings(const Type& sig) {
  static const std::vector<Type> universe = {Type::Int(), Type::Bool(), Type::List(Type::Int()),
                                             Type::List(Type::Bool())};
  const int vars = max_var(sig) + 1;
  std::vector<std::vector<Type>> out{{}};
  for (int v = 0; v < vars; ++v) {
    std::vector<std::vector<Type>> next;
    for (const auto& b : out)
      for (const auto& t : universe) {
        auto nb = b;
        nb.push_back(t);
        next.push_back(std::move(nb));
      }
    out = std::move(next);
  }
  return out;
}

class Compiler {
 public:
  Compiler(Cfg& cfg, const dsl::ListDsl& dsl, const dsl::ConstraintSet& rules,
           const std::map<std::string, double>& overrides)
      : cfg_(cfg), dsl_(dsl), rules_(rules) {
    for (Prim p : dsl_.primitives) weights_[static_cast<int>(p)] = dsl::info(p).default_weight;
    for (const auto& [name, w] : overrides) {
      if (name == "literal") literal_weight_ = w;
      else if (name == "param") param_weight_ = w;
      else if (auto p = dsl::prim_from_name(name)) weights_[static_cast<int>(*p)] = w;
      else throw std::invalid_argument("unknown weight key '" + name + "'");
    }
    params_ = dsl::arrow_args(cfg_.program_type);
  }

  int nonterminal(const Type& type, int depth, std::uint8_t flags) {
    flags = normalize(type, flags);
    auto key = std::make_tuple(type.str(), depth, flags);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    std::vector<Production> prods =
        type.is_arrow() ? arrow_productions(type, depth) : productions(type, depth, flags);
    Count total = 0;
    std::vector<Production> kept;
    for (auto& p : prods) {
      Count c = 1;
      for (int child : p.children) c = sat_mul(c, cfg_.counts[static_cast<std::size_t>(child)]);
      if (c == 0 || p.weight <= 0) continue;
      total = sat_add(total, c);
      kept.push_back(std::move(p));
    }
    const int id = static_cast<int>(cfg_.nonterminals.size());
    cfg_.nonterminals.push_back({type, depth, flags});
    cfg_.productions.push_back(std::move(kept));
    cfg_.counts.push_back(total);
    ids_[key] = id;
    return id;
  }

 private:
  std::uint8_t normalize(const Type& t, std::uint8_t flags) const {
    if (t.kind == TypeKind::Int) {
      flags &= kNoLiteral | kAllowMinus1;
      if (!rules_.on(Rule::C3)) flags |= kAllowMinus1;
      if (flags & kNoLiteral) flags = kNoLiteral;
      return flags;
    }
    if (t.is_list()) return flags & kNoEmpty;
    return kNoFlags;
  }

  std::uint8_t child_flags(Prim p, std::size_t i) const {
    std::uint8_t f = kNoFlags;
    switch (p) {
      case Prim::Eq:
      case Prim::Lt:
      case Prim::Gt:
        if (i == 0 && rules_.on(Rule::C1)) f |= kNoLiteral;
        break;
      case Prim::Extend:
        if (i == 1 && rules_.on(Rule::C2)) f |= kNoEmpty;
        break;
      case Prim::Map:
        if (i == 1 && rules_.on(Rule::C2)) f |= kNoEmpty;
        break;
      case Prim::Length:
        if (i == 0 && rules_.on(Rule::C2)) f |= kNoEmpty;
        break;
      case Prim::Index:
        if (i == 0) f |= kAllowMinus1;
        if (i == 1 && rules_.on(Rule::C4)) f |= kNoEmpty;
        break;
      case Prim::Init:
      case Prim::Tail:
        if (i == 0 && rules_.on(Rule::C4)) f |= kNoEmpty;
        break;
      default: break;
    }
    return f;
  }

  int child(Prim p, std::size_t i, const Type& t, int depth) {
    return nonterminal(t, depth, t.is_arrow() ? std::uint8_t{kNoFlags} : child_flags(p, i));
  }

  double weight(Prim p) const { return weights_.at(static_cast<int>(p)); }

  std::vector<Production> productions(const Type& goal, int depth, std::uint8_t flags) {
    std::vector<Production> out;
    if (depth < 1) return out;
    if (goal.kind == TypeKind::Int && !(flags & kNoLiteral)) {
      for (int v : dsl_.literals) {
        if (v < 0 && !(flags & kAllowMinus1)) continue;
        Production p;
        p.kind = NodeKind::Literal;
        p.value = v;
        p.weight = literal_weight_;
        out.push_back(p);
      }
    }
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (params_[i] != goal) continue;
      Production p;
      p.kind = NodeKind::Param;
      p.value = static_cast<int>(i) + 1;
      p.weight = param_weight_;
      out.push_back(p);
    }
    for (Prim prim : dsl_.primitives) {
      const auto& info = dsl::info(prim);
      const auto args = dsl::arrow_args(info.signature);
      const Type result = dsl::arrow_result(info.signature);
      if (info.arity == 0) {
        if (prim == Prim::Empty && (flags & kNoEmpty)) continue;
        for (const auto& b : bindings(info.signature)) {
          if (subst(result, b) != goal) continue;
          Production p;
          p.prim = prim;
          p.weight = weight(prim);
          out.push_back(p);
          break;
        }
        continue;
      }
      if (depth < 2) continue;
      std::set<std::vector<std::string>> seen;
      for (const auto& b : bindings(info.signature)) {
        if (subst(result, b) != goal) continue;
        std::vector<Type> kids;
        std::vector<std::string> key;
        for (const auto& a : args) {
          kids.push_back(subst(a, b));
          key.push_back(kids.back().str());
        }
        if (!seen.insert(key).second) continue;
        Production p;
        p.prim = prim;
        p.weight = weight(prim);
        for (std::size_t i = 0; i < kids.size(); ++i) p.children.push_back(child(prim, i, kids[i], depth - 1));
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  // Partial applications whose missing last argument has type from() and
  // whose result has type to().
  std::vector<Production> arrow_productions(const Type& goal, int depth) {
    std::vector<Production> out;
    if (depth < 1) return out;
    for (Prim prim : dsl_.primitives) {
      const auto& info = dsl::info(prim);
      if (info.arity == 0) continue;
      const auto args = dsl::arrow_args(info.signature);
      const Type result = dsl::arrow_result(info.signature);
      const std::size_t present = args.size() - 1;
      if (present > 0 && depth < 2) continue;
      std::set<std::vector<std::string>> seen;
      for (const auto& b : bindings(info.signature)) {
        if (subst(args.back(), b) != goal.from() || subst(result, b) != goal.to()) continue;
        std::vector<Type> kids;
        std::vector<std::string> key;
        for (std::size_t i = 0; i < present; ++i) {
          kids.push_back(subst(args[i], b));
          key.push_back(kids.back().str());
        }
        if (!seen.insert(key).second) continue;
        Production p;
        p.prim = prim;
        p.partial = true;
        p.weight = weight(prim);
        for (std::size_t i = 0; i < kids.size(); ++i) p.children.push_back(child(prim, i, kids[i], depth - 1));
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  Cfg& cfg_;
  const dsl::ListDsl& dsl_;
  dsl::ConstraintSet rules_;
  std::map<int, double> weights_;
  double literal_weight_ = 1.0;
  double param_weight_ = 1.0;
  std::vector<Type> params_;
  std::map<std::tuple<std::string, int, std::uint8_t>, int> ids_;
};

Node draw(const Cfg& cfg, Rng& rng, int nt) {
  const auto& prods = cfg.productions.at(static_cast<std::size_t>(nt));
  std::vector<double> w;
  w.reserve(prods.size());
  for (const auto& p : prods) w.push_back(p.weight);
  const Production& p = prods[rng.weighted(w)];
  switch (p.kind) {
    case NodeKind::Literal: return Node::literal(p.value);
    case NodeKind::Param: return Node::param(p.value);
    case NodeKind::Prim: break;
  }
  std::vector<Node> kids;
  kids.reserve(p.children.size());
  for (int c : p.children) kids.push_back(draw(cfg, rng, c));
  return Node::make(p.prim, std::move(kids));
}

}  // namespace

std::string NonTerminal::str() const {
  std::string s = type.str() + "@" + std::to_string(depth);
  if (flags & kNoLiteral) s += "[no-literal]";
  if (flags & kNoEmpty) s += "[no-empty]";
  if (flags & kAllowMinus1) s += "[minus-one]";
  return s;
}

std::string Production::str() const {
  switch (kind) {
    case NodeKind::Literal: return std::to_string(value);
    case NodeKind::Param: return "a" + std::to_string(value);
    case NodeKind::Prim: break;
  }
  return std::string(dsl::info(prim).name) + (partial ? "/partial" : "") + "/" +
         std::to_string(children.size());
}

int Cfg::find(const Type& type, int depth, std::uint8_t flags) const {
  for (std::size_t i = 0; i < nonterminals.size(); ++i) {
    const auto& n = nonterminals[i];
    if (n.depth == depth && n.flags == flags && n.type == type) return static_cast<int>(i);
  }
  return -1;
}

std::string to_string(Count c) {
  if (c == 0) return "0";
  std::string s;
  while (c > 0) {
    s += static_cast<char>('0' + static_cast<int>(c % 10));
    c /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Cfg compile(const dsl::ListDsl& dsl, const dsl::ConstraintSet& constraints,
            const Type& program_type, int max_depth,
            const std::map<std::string, double>& weight_overrides) {
  if (!program_type.is_arrow()) throw std::invalid_argument("program type must be a function type");
  if (max_depth < 2) throw std::invalid_argument("max_depth must be at least 2");
  Cfg cfg;
  cfg.program_type = program_type;
  cfg.max_depth = max_depth;
  cfg.param_count = static_cast<int>(dsl::arrow_args(program_type).size());
  Compiler c(cfg, dsl, constraints, weight_overrides);
  cfg.start = c.nonterminal(dsl::arrow_result(program_type), max_depth, kNoFlags);
  if (cfg.derivations() == 0)
    throw EmptyLanguage("no program of type " + program_type.str() + " within depth " +
                        std::to_string(max_depth));
  return cfg;
}

std::string input_text(const Input& in) {
  std::string out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t k = 0; k < in[i].size(); ++k) {
      if (k) out += ", ";
      out += std::to_string(in[i][k]);
    }
    out += "]";
  }
  return out;
}

Node sample(const Cfg& cfg, Rng& rng, int nonterminal) {
  return draw(cfg, rng, nonterminal < 0 ? cfg.start : nonterminal);
}

Node sample(const Cfg& cfg, const SamplerConfig& config) {
  Rng rng(config.rng_seed);
  return sample(cfg, rng);
}

std::vector<Input> sample_inputs(const Type& program_type, const SamplerConfig& config, Rng& rng) {
  const auto params = dsl::arrow_args(program_type);
  std::vector<Input> out;
  for (int n = 0; n < config.input_count; ++n) {
    Input in;
    for (const auto& p : params) {
      if (p != Type::List(Type::Int()))
        throw std::invalid_argument("inputs can only be sampled for L(int) parameters");
      std::vector<std::int64_t> xs(static_cast<std::size_t>(rng.between(config.list_len_lo, config.list_len_hi)));
      for (auto& x : xs) x = rng.between(config.element_lo, config.element_hi);
      in.push_back(std::move(xs));
    }
    out.push_back(std::move(in));
  }
  return out;
}

Runner builtin_runner() {
  return [](const Node& ast, const std::vector<Input>& inputs) -> std::optional<std::vector<std::string>> {
    const int params = inputs.empty() ? 0 : static_cast<int>(inputs.front().size());
    const auto prog = transpile::translate(ast, "f", params);
    std::vector<std::string> outs;
    for (const auto& in : inputs) {
      std::vector<minipy::Value> args;
      for (const auto& xs : in) {
        std::vector<minipy::Value> items;
        for (auto x : xs) items.push_back(minipy::Value::integer(x));
        args.push_back(minipy::Value::list(std::move(items)));
      }
      auto r = minipy::interpret(prog.ast, args);
      if (!r.ok()) return std::nullopt;
      outs.push_back(minipy::repr(r.output));
    }
    return outs;
  };
}

SampledProgram sample_valid_program(const Cfg& cfg, const SamplerConfig& config, Rng& rng,
                                    const Runner& runner) {
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    Node ast = sample(cfg, rng);
    if (!dsl::check_constraints(ast, dsl::Phase::Sample, cfg.param_count, config.constraints).empty())
      continue;
    auto inputs = sample_inputs(cfg.program_type, config, rng);
    auto outs = runner(ast, inputs);
    if (!outs) continue;
    if (std::all_of(outs->begin(), outs->end(), [&](const auto& o) { return o == outs->front(); }))
      continue;
    return {std::move(ast), std::move(inputs), std::move(*outs), attempt};
  }
  throw AttemptsExhausted("no valid program after " + std::to_string(config.max_attempts) +
                          " attempts");
}

}  // namespace execbench::grammar
