#include <cctype>
#include <charconv>
#include <set>

#include "execbench/minipy.hpp"

namespace execbench::minipy {

namespace {

enum class Tok { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

const std::set<std::string, std::less<>> kUnsupportedKeywords = {
    "import", "from", "class", "lambda", "pass", "try", "except", "finally", "raise",
    "with", "as", "yield", "global", "nonlocal", "del", "assert", "async", "await",
    "in", "is", "elif", "else", "def", "for", "while", "if", "return", "break", "continue",
    "and", "or", "not", "True", "False", "None"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<int> indents{0};
    bool at_line_start = true;
    while (pos_ < src_.size()) {
      if (at_line_start && depth_ == 0) {
        int col = 0;
        std::size_t p = pos_;
        while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) {
          col = src_[p] == '\t' ? (col / 8 + 1) * 8 : col + 1;
          ++p;
        }
        if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#' || src_[p] == '\r') {
          // blank or comment-only line
          while (p < src_.size() && src_[p] != '\n') ++p;
          pos_ = p;
          if (pos_ < src_.size()) {
            ++pos_;
            ++line_;
          }
          continue;
        }
        pos_ = p;
        at_line_start = false;
        if (col > indents.back()) {
          indents.push_back(col);
          out_.push_back({Tok::Indent, "", line_});
        } else {
          while (col < indents.back()) {
            indents.pop_back();
            out_.push_back({Tok::Dedent, "", line_});
          }
          if (col != indents.back()) throw SyntaxError(line_, "inconsistent dedent");
        }
      }
      char c = src_[pos_];
      if (c == '\n') {
        ++pos_;
        if (depth_ == 0) {
          out_.push_back({Tok::Newline, "", line_});
          at_line_start = true;
        }
        ++line_;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        ++pos_;
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
        pos_ += 2;
        ++line_;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t s = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"'))
          throw SyntaxError(line_, "string literals are not supported");
        out_.push_back({Tok::Name, std::string(src_.substr(s, pos_ - s)), line_});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::size_t s = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '.'))
          ++pos_;
        std::string text(src_.substr(s, pos_ - s));
        for (char d : text)
          if (!std::isdigit(static_cast<unsigned char>(d)) && d != '_')
            throw SyntaxError(line_, "unsupported numeric literal '" + text + "'");
        out_.push_back({Tok::Number, text, line_});
        continue;
      }
      if (c == '\'' || c == '"') throw SyntaxError(line_, "string literals are not supported");
      static const char* ops[] = {"//=", "**=", ">>=", "<<=", "->", "**", "//", "==", "!=", "<=",
                                  ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", ":=",
                                  "<<", ">>"};
      bool matched = false;
      for (const char* op : ops) {
        std::string_view o(op);
        if (src_.substr(pos_, o.size()) == o) {
          out_.push_back({Tok::Op, std::string(o), line_});
          pos_ += o.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("+-*/%<>=()[]{},:.;@&|^~").find(c) != std::string_view::npos) {
        if (c == '(' || c == '[' || c == '{') ++depth_;
        if (c == ')' || c == ']' || c == '}') --depth_;
        out_.push_back({Tok::Op, std::string(1, c), line_});
        ++pos_;
        continue;
      }
      throw SyntaxError(line_, std::string("unexpected character '") + c + "'");
    }
    if (!out_.empty() && out_.back().kind != Tok::Newline) out_.push_back({Tok::Newline, "", line_});
    while (indents.size() > 1) {
      indents.pop_back();
      out_.push_back({Tok::Dedent, "", line_});
    }
    out_.push_back({Tok::End, "", line_});
    return std::move(out_);
  }

  int lines() const { return line_; }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int depth_ = 0;
  std::vector<Token> out_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Program program() {
    Program p;
    if (!is_name("def")) fail("expected a function definition");
    p.fn.line = cur().line;
    advance();
    p.fn.name = name();
    expect("(");
    if (!is_op(")")) {
      for (;;) {
        std::string param = name();
        p.fn.params.push_back(param);
        if (is_op(",")) {
          advance();
          if (is_op(")")) break;
          continue;
        }
        break;
      }
    }
    expect(")");
    if (is_op("->")) fail("annotations are not supported");
    expect(":");
    p.fn.body = suite();
    if (cur().kind != Tok::End) fail("only a single function definition is supported");
    return p;
  }

 private:
  std::vector<Stmt> suite() {
    std::vector<Stmt> body;
    if (cur().kind != Tok::Newline) {
      body.push_back(simple());
      expect_newline();
      return body;
    }
    advance();
    if (cur().kind != Tok::Indent) fail("expected an indented block");
    advance();
    while (cur().kind != Tok::Dedent && cur().kind != Tok::End) body.push_back(statement());
    if (cur().kind == Tok::Dedent) advance();
    return body;
  }

  Stmt statement() {
    if (is_name("if")) return if_stmt();
    if (is_name("for")) return for_stmt();
    if (is_name("while")) return while_stmt();
    if (is_name("def")) fail("nested function definitions are not supported");
    Stmt s = simple();
    expect_newline();
    return s;
  }

  Stmt simple() {
    Stmt s;
    s.line = cur().line;
    if (is_name("return")) {
      advance();
      s.kind = StmtKind::Return;
      if (cur().kind != Tok::Newline) {
        s.values.push_back(expr());
        if (is_op(",")) fail("tuple values are not supported");
      }
      return s;
    }
    if (is_name("break") || is_name("continue")) {
      if (loop_depth_ == 0) fail("'" + cur().text + "' outside loop");
      s.kind = is_name("break") ? StmtKind::Break : StmtKind::Continue;
      advance();
      return s;
    }
    if (cur().kind == Tok::Name && kUnsupportedKeywords.count(cur().text) &&
        cur().text != "not" && cur().text != "True" && cur().text != "False" && cur().text != "None")
      fail("'" + cur().text + "' is not supported");

    std::vector<Expr> lhs = expr_list();
    if (is_op("=")) {
      advance();
      for (const auto& t : lhs)
        if (t.kind != ExprKind::Name && t.kind != ExprKind::Subscript)
          fail("cannot assign to expression");
      s.kind = StmtKind::Assign;
      s.targets = std::move(lhs);
      s.values = expr_list();
      if (is_op("=")) fail("chained assignment is not supported");
      if (s.targets.size() == 1 && s.values.size() > 1) fail("tuple values are not supported");
      if (s.targets.size() > 1 && s.values.size() > 1 && s.targets.size() != s.values.size())
        fail("tuple assignment arity mismatch");
      return s;
    }
    if (cur().kind == Tok::Op && cur().text.size() >= 2 && cur().text.back() == '=' &&
        cur().text != "==" && cur().text != "<=" && cur().text != ">=" && cur().text != "!=")
      fail("augmented assignment is not supported");
    if (lhs.size() != 1) fail("tuple values are not supported");
    s.kind = StmtKind::Expr;
    s.values = std::move(lhs);
    return s;
  }

  Stmt if_stmt() {
    Stmt s;
    s.kind = StmtKind::If;
    s.line = cur().line;
    advance();
    s.values.push_back(expr());
    expect(":");
    s.bodies.push_back(suite());
    while (is_name("elif")) {
      advance();
      s.values.push_back(expr());
      expect(":");
      s.bodies.push_back(suite());
    }
    if (is_name("else")) {
      advance();
      expect(":");
      s.bodies.push_back(suite());
      s.has_else = true;
    }
    return s;
  }

  Stmt for_stmt() {
    Stmt s;
    s.kind = StmtKind::For;
    s.line = cur().line;
    advance();
    s.var = name();
    if (!is_name("in")) fail("expected 'in'");
    advance();
    if (!is_name("range")) fail("only 'for ... in range(...)' loops are supported");
    advance();
    expect("(");
    while (!is_op(")")) {
      s.values.push_back(expr());
      if (is_op(",")) advance();
      else break;
    }
    expect(")");
    if (s.values.empty() || s.values.size() > 3) fail("range() takes 1 to 3 arguments");
    expect(":");
    ++loop_depth_;
    s.bodies.push_back(suite());
    --loop_depth_;
    if (is_name("else")) fail("loop else is not supported");
    return s;
  }

  Stmt while_stmt() {
    Stmt s;
    s.kind = StmtKind::While;
    s.line = cur().line;
    advance();
    s.values.push_back(expr());
    expect(":");
    ++loop_depth_;
    s.bodies.push_back(suite());
    --loop_depth_;
    if (is_name("else")) fail("loop else is not supported");
    return s;
  }

  std::vector<Expr> expr_list() {
    std::vector<Expr> out{expr()};
    while (is_op(",")) {
      advance();
      if (cur().kind == Tok::Newline || is_op("=")) break;
      out.push_back(expr());
    }
    return out;
  }

  Expr expr() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (is_name("or")) {
      int line = cur().line;
      advance();
      lhs = bool_op("or", std::move(lhs), and_expr(), line);
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (is_name("and")) {
      int line = cur().line;
      advance();
      lhs = bool_op("and", std::move(lhs), not_expr(), line);
    }
    return lhs;
  }

  static Expr bool_op(std::string op, Expr a, Expr b, int line) {
    Expr e;
    e.kind = ExprKind::BoolOp;
    e.op = std::move(op);
    e.line = line;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
  }

  Expr not_expr() {
    if (is_name("not")) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.op = "not";
      e.line = cur().line;
      advance();
      e.kids.push_back(not_expr());
      return e;
    }
    return comparison();
  }

  Expr comparison() {
    Expr first = arith();
    if (!is_compare()) {
      if (is_name("in") || is_name("is")) fail("'" + cur().text + "' is not supported");
      return first;
    }
    Expr e;
    e.kind = ExprKind::Compare;
    e.line = first.line;
    e.kids.push_back(std::move(first));
    while (is_compare()) {
      e.ops.push_back(cur().text);
      advance();
      e.kids.push_back(arith());
    }
    return e;
  }

  bool is_compare() const {
    if (cur().kind != Tok::Op) return false;
    const auto& s = cur().text;
    return s == "<" || s == "<=" || s == ">" || s == ">=" || s == "==" || s == "!=";
  }

  Expr arith() {
    Expr lhs = term();
    while (is_op("+") || is_op("-")) {
      std::string op = cur().text;
      int line = cur().line;
      advance();
      lhs = binary(op, std::move(lhs), term(), line);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (is_op("/")) fail("true division is not supported");
      if (is_op("**")) fail("'**' is not supported");
      if (!(is_op("*") || is_op("//") || is_op("%"))) break;
      std::string op = cur().text;
      int line = cur().line;
      advance();
      lhs = binary(op, std::move(lhs), factor(), line);
    }
    return lhs;
  }

  static Expr binary(std::string op, Expr a, Expr b, int line) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.op = std::move(op);
    e.line = line;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
  }

  Expr factor() {
    if (is_op("-")) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.op = "-";
      e.line = cur().line;
      advance();
      e.kids.push_back(factor());
      return e;
    }
    if (is_op("+") || is_op("~")) fail("unary '" + cur().text + "' is not supported");
    Expr e = primary();
    if (is_op("**")) fail("'**' is not supported");
    return e;
  }

  Expr primary() {
    Expr e = atom();
    for (;;) {
      if (is_op("[")) {
        int line = cur().line;
        advance();
        Expr idx = expr();
        if (is_op(":")) fail("slicing is not supported");
        expect("]");
        Expr s;
        s.kind = ExprKind::Subscript;
        s.line = line;
        s.kids.push_back(std::move(e));
        s.kids.push_back(std::move(idx));
        e = std::move(s);
      } else if (is_op(".")) {
        advance();
        std::string method = name();
        if (method != "append" && method != "extend" && method != "pop")
          fail("method '" + method + "' is not supported");
        Expr m;
        m.kind = ExprKind::Method;
        m.name = method;
        m.line = e.line;
        m.kids.push_back(std::move(e));
        auto args = call_args();
        const std::size_t n = args.size();
        if ((method == "pop" && n > 1) || (method != "pop" && n != 1))
          fail("wrong number of arguments to " + method);
        for (auto& a : args) m.kids.push_back(std::move(a));
        e = std::move(m);
      } else if (is_op("(")) {
        fail("unsupported call");
      } else {
        return e;
      }
    }
  }

  std::vector<Expr> call_args() {
    expect("(");
    std::vector<Expr> args;
    while (!is_op(")")) {
      args.push_back(expr());
      if (is_op("=")) fail("keyword arguments are not supported");
      if (is_op(",")) advance();
      else break;
    }
    expect(")");
    return args;
  }

  Expr atom() {
    const Token& tk = cur();
    Expr e;
    e.line = tk.line;
    if (tk.kind == Tok::Number) {
      e.kind = ExprKind::Int;
      std::string digits;
      for (char c : tk.text)
        if (c != '_') digits += c;
      if (digits.size() > 1 && digits[0] == '0' && digits.find_first_not_of('0') != std::string::npos)
        fail("leading zeros in integer literal");
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), e.ival);
      if (ec != std::errc()) fail("integer literal out of range");
      advance();
      return e;
    }
    if (tk.kind == Tok::Name) {
      if (tk.text == "True" || tk.text == "False") {
        e.kind = ExprKind::Bool;
        e.bval = tk.text == "True";
        advance();
        return e;
      }
      if (tk.text == "None") {
        e.kind = ExprKind::None;
        advance();
        return e;
      }
      if (kUnsupportedKeywords.count(tk.text)) fail("unexpected keyword '" + tk.text + "'");
      std::string id = tk.text;
      advance();
      if (is_op("(")) {
        if (id != "len") fail("call to '" + id + "' is not supported");
        auto args = call_args();
        if (args.size() != 1) fail("len() takes exactly one argument");
        e.kind = ExprKind::Call;
        e.name = id;
        e.kids = std::move(args);
        return e;
      }
      e.kind = ExprKind::Name;
      e.name = id;
      return e;
    }
    if (is_op("(")) {
      advance();
      Expr inner = expr();
      if (is_op(",")) fail("tuple values are not supported");
      expect(")");
      return inner;
    }
    if (is_op("[")) {
      advance();
      e.kind = ExprKind::List;
      while (!is_op("]")) {
        e.kids.push_back(expr());
        if (is_name("for")) fail("comprehensions are not supported");
        if (is_op(",")) advance();
        else break;
      }
      expect("]");
      return e;
    }
    if (tk.kind == Tok::Indent) fail("unexpected indent");
    fail(tk.kind == Tok::Newline ? "unexpected end of line" : "unexpected '" + tk.text + "'");
  }

  const Token& cur() const { return t_[i_]; }
  void advance() {
    if (i_ + 1 < t_.size()) ++i_;
  }
  bool is_op(std::string_view s) const { return cur().kind == Tok::Op && cur().text == s; }
  bool is_name(std::string_view s) const { return cur().kind == Tok::Name && cur().text == s; }

  std::string name() {
    if (cur().kind != Tok::Name || kUnsupportedKeywords.count(cur().text)) fail("expected a name");
    std::string s = cur().text;
    advance();
    return s;
  }
  void expect(std::string_view op) {
    if (!is_op(op)) fail("expected '" + std::string(op) + "'");
    advance();
  }
  void expect_newline() {
    if (is_op(";")) fail("';' is not supported");
    if (cur().kind != Tok::Newline) fail("expected end of line");
    advance();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(cur().line, msg); }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  int loop_depth_ = 0;
};

int count_statements(const std::vector<Stmt>& body) {
  int n = 0;
  for (const auto& s : body) {
    ++n;
    for (const auto& b : s.bodies) n += count_statements(b);
  }
  return n;
}

}  // namespace

int Program::statement_count() const { return 1 + count_statements(fn.body); }

Program parse(std::string_view source) {
  Lexer lex(source);
  auto toks = lex.run();
  // leading NEWLINE tokens cannot occur: blank lines are skipped by the lexer
  Parser p(std::move(toks));
  Program prog = p.program();
  prog.line_count = lex.lines();
  return prog;
}

}  // namespace execbench::minipy
