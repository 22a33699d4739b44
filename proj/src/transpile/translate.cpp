#include <algorithm>

#include "execbench/transpile.hpp"

namespace execbench::transpile {

using dsl::Node;
using dsl::NodeKind;
using dsl::Prim;

namespace {

int max_param(const Node& n) {
  int m = n.kind == NodeKind::Param ? n.value : 0;
  for (const auto& c : n.children) m = std::max(m, max_param(c));
  return m;
}

bool is_bool_op(const Node& n) { return n.is_prim(Prim::And) || n.is_prim(Prim::Or); }

class Translator {
 public:
  Translator(const Node& root, std::string name, int params)
      : root_(root), name_(std::move(name)), params_(params) {}

  ImpProgram run() {
    int k = 0;
    number(root_, k);
    int next = 1;
    std::vector<std::string> empties;
    assign_vars(root_, next, empties);
    assign_exprs(root_);

    std::string header = "def " + name_ + "(";
    for (int i = 1; i <= params_; ++i) header += (i > 1 ? ", a" : "a") + std::to_string(i);
    lines_.push_back(header + "):");
    if (!empties.empty()) {
      std::string lhs, rhs;
      for (std::size_t i = 0; i < empties.size(); ++i) {
        lhs += (i ? ", " : "") + empties[i];
        rhs += i ? ", []" : "[]";
      }
      line(1, lhs + " = " + rhs);
    }
    emit(root_);
    line(1, "return " + E_.at(&root_));

    ImpProgram out;
    for (const auto& l : lines_) out.source += l + "\n";
    out.function_name = name_;
    out.line_map = std::move(line_map_);
    out.loc = loc(out.source);
    out.ast = minipy::parse(out.source);
    return out;
  }

 private:
  void number(const Node& n, int& k) {
    ids_[&n] = k++;
    for (const auto& c : n.children) number(c, k);
  }

  void assign_vars(const Node& n, int& next, std::vector<std::string>& empties) {
    for (const auto& c : n.children) assign_vars(c, next, empties);
    if (n.is_prim(Prim::Empty) || n.is_prim(Prim::If)) {
      V_[&n] = "v" + std::to_string(next++);
      if (n.is_prim(Prim::Empty)) empties.push_back(V_[&n]);
    }
  }

  void assign_exprs(const Node& n) {
    for (const auto& c : n.children) assign_exprs(c);
    if (!n.partial()) E_[&n] = expr(n, "");
  }

  std::string arg(const Node& n, std::size_t i, const std::string& hole) const {
    if (i < n.children.size()) return E_.at(&n.children[i]);
    if (hole.empty()) throw UntranslatableNode("missing argument outside map: " + dsl::to_text(n));
    return hole;
  }

  // Operand of a boolean operator, parenthesized when it is itself and/or.
  std::string bool_arg(const Node& n, std::size_t i, const std::string& hole) const {
    std::string s = arg(n, i, hole);
    if (i < n.children.size() && is_bool_op(n.children[i])) return "(" + s + ")";
    return s;
  }

  std::string expr(const Node& n, const std::string& hole) const {
    switch (n.kind) {
      case NodeKind::Literal: return std::to_string(n.value);
      case NodeKind::Param: return "a" + std::to_string(n.value);
      case NodeKind::Prim: break;
    }
    switch (n.prim) {
      case Prim::Empty:
      case Prim::If: return V_.at(&n);
      case Prim::Append:
      case Prim::Extend:
      case Prim::Map: return arg(n, 1, hole);
      case Prim::Init:
      case Prim::Tail: return arg(n, 0, hole);
      case Prim::Length: return "len(" + arg(n, 0, hole) + ")";
      case Prim::Index: return arg(n, 1, hole) + "[" + arg(n, 0, hole) + "]";
      case Prim::Eq: return arg(n, 0, hole) + " == " + arg(n, 1, hole);
      case Prim::Lt: return arg(n, 0, hole) + " < " + arg(n, 1, hole);
      case Prim::Gt: return arg(n, 0, hole) + " > " + arg(n, 1, hole);
      case Prim::And: return bool_arg(n, 0, hole) + " and " + bool_arg(n, 1, hole);
      case Prim::Or: return bool_arg(n, 0, hole) + " or " + bool_arg(n, 1, hole);
      case Prim::Not: return "not " + bool_arg(n, 0, hole);
    }
    throw UntranslatableNode(dsl::to_text(n));
  }

  void line(int indent, const std::string& text) {
    lines_.push_back(std::string(4 * static_cast<std::size_t>(indent), ' ') + text);
  }

  void mark(const Node& n) { line_map_[ids_.at(&n)] = static_cast<int>(lines_.size()) + 1; }

  void emit(const Node& n) {
    for (const auto& c : n.children) emit(c);
    if (n.kind != NodeKind::Prim || n.partial()) return;
    if (n.is_prim(Prim::Map)) {
      emit_map(n, E_.at(&n.children[1]), 1, 0);
    } else if (dsl::info(n.prim).statement) {
      statement(n, 1, "");
    }
  }

  void emit_map(const Node& map, const std::string& list, int indent, int level) {
    static const char* kIndexVars[] = {"i", "j", "k"};
    if (level > 2) throw UntranslatableNode("map nesting too deep: " + dsl::to_text(map));
    const std::string var = kIndexVars[level];
    mark(map);
    line(indent, "for " + var + " in range(len(" + list + ")):");
    const std::string hole = list + "[" + var + "]";
    const Node& fn = map.children[0];
    if (fn.kind != NodeKind::Prim) throw UntranslatableNode("map function is not a primitive");
    if (fn.is_prim(Prim::Map)) {
      emit_map(fn, hole, indent + 1, level + 1);
    } else if (dsl::info(fn.prim).statement) {
      statement(fn, indent + 1, hole);
      if (fn.is_prim(Prim::If)) line(indent + 1, hole + " = " + V_.at(&fn));
    } else {
      mark(fn);
      line(indent + 1, hole + " = " + expr(fn, hole));
    }
  }

  void statement(const Node& n, int indent, const std::string& hole) {
    mark(n);
    switch (n.prim) {
      case Prim::Append: line(indent, arg(n, 1, hole) + ".append(" + arg(n, 0, hole) + ")"); break;
      case Prim::Extend: line(indent, arg(n, 1, hole) + ".extend(" + arg(n, 0, hole) + ")"); break;
      case Prim::Init: line(indent, arg(n, 0, hole) + ".pop()"); break;
      case Prim::Tail: line(indent, arg(n, 0, hole) + ".pop(0)"); break;
      case Prim::If: {
        const std::string& v = V_.at(&n);
        line(indent, "if " + arg(n, 0, hole) + ":");
        line(indent + 1, v + " = " + arg(n, 1, hole));
        line(indent, "else:");
        line(indent + 1, v + " = " + arg(n, 2, hole));
        break;
      }
      default: throw UntranslatableNode(dsl::to_text(n));
    }
  }

  const Node& root_;
  std::string name_;
  int params_;
  std::map<const Node*, int> ids_;
  std::map<const Node*, std::string> V_;
  std::map<const Node*, std::string> E_;
  std::vector<std::string> lines_;
  std::map<int, int> line_map_;
};

}  // namespace

ImpProgram translate(const Node& ast, const std::string& function_name, int param_count) {
  if (param_count <= 0) param_count = std::max(1, max_param(ast));
  return Translator(ast, function_name, param_count).run();
}

int loc(std::string_view source) {
  int n = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    auto l = source.substr(start, end - start);
    if (l.find_first_not_of(" \t\r") != std::string_view::npos) ++n;
    start = end + 1;
  }
  return n;
}

}  // namespace execbench::transpile
