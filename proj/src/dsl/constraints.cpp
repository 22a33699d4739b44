#include <set>

#include "execbench/dsl.hpp"

namespace execbench::dsl {

std::string_view rule_name(Rule r) {
  static constexpr std::array<std::string_view, 8> names{"c1", "c2", "c3", "c4",
                                                         "s1", "s2", "s3", "s4"};
  return names[static_cast<int>(r)];
}

namespace {

bool is_comparison(Prim p) { return p == Prim::Eq || p == Prim::Lt || p == Prim::Gt; }

class Checker {
 public:
  Checker(Phase phase, const ConstraintSet& rules, std::vector<Violation>& out)
      : compile_(phase != Phase::Sample), sample_(phase != Phase::Compile), rules_(rules),
        out_(out) {}

  void visit(const Node& n, bool minus_one_ok) {
    if (n.kind == NodeKind::Literal) {
      if (n.value == -1 && !minus_one_ok) add(Rule::C3, n);
      return;
    }
    if (n.kind == NodeKind::Param) {
      params_.insert(n.value);
      return;
    }
    const auto& kids = n.children;
    const int k = static_cast<int>(kids.size());
    auto is_empty = [&](int i) { return i < k && kids[i].is_prim(Prim::Empty); };

    switch (n.prim) {
      case Prim::Eq:
      case Prim::Lt:
      case Prim::Gt:
        if (k >= 1 && kids[0].kind == NodeKind::Literal) add(Rule::C1, n);
        break;
      case Prim::Extend:
        if (is_empty(1)) add(Rule::C2, n);
        if (k == 2 && kids[0] == kids[1]) add(Rule::S2, n);
        break;
      case Prim::Length:
        if (is_empty(0)) add(Rule::C2, n);
        break;
      case Prim::Map:
        if (is_empty(1)) add(Rule::C2, n);
        break;
      case Prim::Index:
        if (is_empty(1)) add(Rule::C4, n);
        break;
      case Prim::Init:
      case Prim::Tail:
        if (is_empty(0)) add(Rule::C4, n);
        break;
      case Prim::If:
        if (k == 3 && kids[1] == kids[2]) add(Rule::S3, n);
        break;
      default: break;
    }
    if ((is_comparison(n.prim) || n.prim == Prim::And || n.prim == Prim::Or) && k == 2 &&
        kids[0] == kids[1])
      add(Rule::S1, n);

    for (int i = 0; i < k; ++i) visit(kids[i], n.prim == Prim::Index && i == 0);
  }

  void finish(int param_count) {
    if (!sample_ || !rules_.on(Rule::S4)) return;
    for (int p = 1; p <= param_count; ++p)
      if (!params_.count(p)) out_.push_back({Rule::S4, "a" + std::to_string(p)});
  }

 private:
  void add(Rule r, const Node& where) {
    const bool compile_rule = r <= Rule::C4;
    if (compile_rule ? !compile_ : !sample_) return;
    if (!rules_.on(r)) return;
    out_.push_back({r, to_text(where)});
  }

  bool compile_;
  bool sample_;
  const ConstraintSet& rules_;
  std::vector<Violation>& out_;
  std::set<int> params_;
};

}  // namespace

std::vector<Violation> check_constraints(const Node& ast, Phase phase, int param_count,
                                         const ConstraintSet& rules) {
  std::vector<Violation> out;
  Checker c(phase, rules, out);
  c.visit(ast, false);
  c.finish(param_count);
  return out;
}

}  // namespace execbench::dsl
