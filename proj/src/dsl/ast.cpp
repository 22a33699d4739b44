#include <algorithm>
#include <cctype>

#include "execbench/dsl.hpp"

namespace execbench::dsl {

int Node::depth() const {
  int d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

int Node::size() const {
  int s = 1;
  for (const auto& c : children) s += c.size();
  return s;
}

std::string to_text(const Node& n) {
  switch (n.kind) {
    case NodeKind::Literal: return std::to_string(n.value);
    case NodeKind::Param: return "a" + std::to_string(n.value);
    case NodeKind::Prim: break;
  }
  const auto& pi = info(n.prim);
  if (pi.arity == 0) return std::string(pi.name);
  std::string out = "(";
  out += pi.name;
  for (const auto& c : n.children) {
    out += ' ';
    out += to_text(c);
  }
  out += ')';
  return out;
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  Node parse() {
    Node n = term();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return n;
  }

 private:
  Node term() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (s_[pos_] == '(') {
      ++pos_;
      std::string head = token();
      auto prim = prim_from_name(head);
      if (!prim) fail("unknown primitive '" + head + "'");
      Node n = Node::make(*prim);
      for (;;) {
        skip();
        if (pos_ >= s_.size()) fail("unclosed '('");
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        n.children.push_back(term());
      }
      if (static_cast<int>(n.children.size()) > info(*prim).arity)
        fail("too many arguments to " + head);
      return n;
    }
    std::string tok = token();
    if (tok.empty()) fail("expected a term");
    if (tok == "empty") return Node::make(Prim::Empty);
    if (tok.size() > 1 && tok[0] == 'a' && std::all_of(tok.begin() + 1, tok.end(), ::isdigit))
      return Node::param(std::stoi(tok.substr(1)));
    if (std::isdigit(static_cast<unsigned char>(tok[0])) ||
        (tok[0] == '-' && tok.size() > 1)) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used == tok.size() && v >= kMinLiteral && v <= kMaxLiteral) return Node::literal(v);
      } catch (const std::exception&) {
      }
      fail("literal '" + tok + "' outside [" + std::to_string(kMinLiteral) + ", " + std::to_string(kMaxLiteral) + "]");
    }
    fail("bad atom '" + tok + "'");
  }

  std::string token() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')')
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("dsl: " + why + " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse_program(std::string_view text) { return TermParser(text).parse(); }

}  // namespace execbench::dsl
