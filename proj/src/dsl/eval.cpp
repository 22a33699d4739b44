#include "execbench/dsl_eval.hpp"

#include <map>

namespace execbench::dsl {

Value Value::int_list(const std::vector<std::int64_t>& xs) {
  std::vector<Value> items;
  items.reserve(xs.size());
  for (auto x : xs) items.push_back(integer(x));
  return list(std::move(items));
}

std::string Value::repr() const {
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "True" : "False";
  const auto& items = *std::get<ListRef>(v);
  std::string out = "[";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ", ";
    out += items[k].repr();
  }
  return out + "]";
}

Value Value::clone() const {
  if (auto l = std::get_if<ListRef>(&v)) {
    std::vector<Value> items;
    for (const auto& x : **l) items.push_back(x.clone());
    return list(std::move(items));
  }
  return *this;
}

namespace {

struct Raised {
  EvalError kind;
};

// Slot of a list element bound to the missing argument of a map function.
// Reads go back through the parent chain every time, like `xs[i][j]`.
struct Hole {
  const Hole* parent = nullptr;
  ListRef base;
  std::size_t index = 0;

  ListRef container() const {
    if (!parent) return base;
    return std::get<ListRef>(parent->read().v);
  }
  Value read() const { return container()->at(index); }
  void write(Value x) const { (*container())[index] = std::move(x); }
};

class Evaluator {
 public:
  Evaluator(const Node& root, const std::vector<Value>& inputs) : root_(root) {
    for (const auto& in : inputs) params_.push_back(in.clone());
    allocate_empties(root_);
  }

  EvalOutcome run() {
    try {
      exec(root_);
      return {EvalError::None, value(root_).repr()};
    } catch (const Raised& r) {
      return {r.kind, {}};
    }
  }

 private:
  void allocate_empties(const Node& n) {
    if (n.is_prim(Prim::Empty)) empties_[&n] = std::make_shared<std::vector<Value>>();
    for (const auto& c : n.children) allocate_empties(c);
  }

  static ListRef as_list(const Value& v) { return std::get<ListRef>(v.v); }
  static bool truthy(const Value& v) { return std::get<bool>(v.v); }

  // The argument at `i`, or the bound hole when `i` is the missing one.
  Value arg(const Node& n, std::size_t i) {
    if (i < n.children.size()) return value(n.children[i]);
    return holes_.at(&n)->read();
  }

  // Side effects of the subtree, in post-order. Expression nodes have none.
  void exec(const Node& n) {
    if (n.kind != NodeKind::Prim) return;
    if (n.partial()) {
      for (const auto& c : n.children) exec(c);
      return;
    }
    for (const auto& c : n.children) exec(c);
    switch (n.prim) {
      case Prim::Map: run_map(n.children[0], as_list(value(n.children[1])), nullptr); break;
      case Prim::Append:
      case Prim::Extend:
      case Prim::Init:
      case Prim::Tail:
      case Prim::If: apply_statement(n); break;
      default: break;
    }
  }

  void apply_statement(const Node& n) {
    switch (n.prim) {
      case Prim::Append: {
        ListRef target = as_list(arg(n, 1));
        Value x = arg(n, 0);
        target->push_back(std::move(x));
        break;
      }
      case Prim::Extend: {
        ListRef target = as_list(arg(n, 1));
        ListRef src = as_list(arg(n, 0));
        std::vector<Value> copy = *src;
        target->insert(target->end(), copy.begin(), copy.end());
        break;
      }
      case Prim::Init: {
        ListRef target = as_list(arg(n, 0));
        if (target->empty()) throw Raised{EvalError::PopFromEmpty};
        target->pop_back();
        break;
      }
      case Prim::Tail: {
        ListRef target = as_list(arg(n, 0));
        if (target->empty()) throw Raised{EvalError::PopFromEmpty};
        target->erase(target->begin());
        break;
      }
      case Prim::If: {
        Value c = arg(n, 0);
        if_vars_[&n] = truthy(c) ? arg(n, 1) : arg(n, 2);
        break;
      }
      default: break;
    }
  }

  void run_map(const Node& fn, ListRef list, const Hole* outer) {
    // range(len(xs)) is fixed when the loop starts.
    const std::size_t count = list->size();
    for (std::size_t i = 0; i < count; ++i) {
      Hole hole{outer, outer ? nullptr : list, i};
      holes_[&fn] = &hole;
      if (fn.is_prim(Prim::Map)) {
        const Node& inner = fn.children[0];
        run_map(inner, as_list(hole.read()), &hole);
      } else if (info(fn.prim).statement) {
        apply_statement(fn);
        if (fn.prim == Prim::If) hole.write(if_vars_.at(&fn));
      } else {
        Value result = value(fn);
        hole.write(std::move(result));
      }
      holes_.erase(&fn);
    }
  }

  Value value(const Node& n) {
    switch (n.kind) {
      case NodeKind::Literal: return Value::integer(n.value);
      case NodeKind::Param: return params_.at(n.value - 1);
      case NodeKind::Prim: break;
    }
    switch (n.prim) {
      case Prim::Empty: return {empties_.at(&n)};
      case Prim::If: return if_vars_.at(&n);
      case Prim::Append:
      case Prim::Extend: return arg(n, 1);
      case Prim::Init:
      case Prim::Tail: return arg(n, 0);
      case Prim::Map: return arg(n, 1);
      case Prim::Length: return Value::integer(static_cast<std::int64_t>(as_list(arg(n, 0))->size()));
      case Prim::Index: {
        ListRef xs = as_list(arg(n, 1));
        const std::int64_t k = std::get<std::int64_t>(arg(n, 0).v);
        const auto len = static_cast<std::int64_t>(xs->size());
        const std::int64_t at = k < 0 ? k + len : k;
        if (at < 0 || at >= len) throw Raised{EvalError::IndexOutOfRange};
        return (*xs)[static_cast<std::size_t>(at)];
      }
      case Prim::Eq:
      case Prim::Lt:
      case Prim::Gt: {
        const auto a = std::get<std::int64_t>(arg(n, 0).v);
        const auto b = std::get<std::int64_t>(arg(n, 1).v);
        const bool r = n.prim == Prim::Eq ? a == b : n.prim == Prim::Lt ? a < b : a > b;
        return Value::boolean(r);
      }
      case Prim::And: {
        Value a = arg(n, 0);
        return truthy(a) ? arg(n, 1) : a;
      }
      case Prim::Or: {
        Value a = arg(n, 0);
        return truthy(a) ? a : arg(n, 1);
      }
      case Prim::Not: return Value::boolean(!truthy(arg(n, 0)));
    }
    return Value::integer(0);
  }

  const Node& root_;
  std::vector<Value> params_;
  std::map<const Node*, ListRef> empties_;
  std::map<const Node*, Value> if_vars_;
  std::map<const Node*, const Hole*> holes_;
};

}  // namespace

EvalOutcome eval_dsl(const Node& ast, const std::vector<Value>& inputs) {
  return Evaluator(ast, inputs).run();
}

}  // namespace execbench::dsl
