#include "execbench/pyliteral.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace execbench::pyliteral {

Literal Literal::from_bool(bool b) {
  Literal l;
  l.kind = Kind::Bool;
  l.boolean = b;
  return l;
}

Literal Literal::from_int(std::int64_t i) {
  Literal l;
  l.kind = Kind::Int;
  l.integer = std::to_string(i);
  return l;
}

Literal Literal::from_str(std::string s) {
  Literal l;
  l.kind = Kind::Str;
  l.str = std::move(s);
  return l;
}

Literal Literal::list(std::vector<Literal> xs) {
  Literal l;
  l.kind = Kind::List;
  l.items = std::move(xs);
  return l;
}

std::optional<std::int64_t> Literal::as_int64() const {
  if (kind != Kind::Int) return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(integer.data(), integer.data() + integer.size(), v);
  if (ec != std::errc() || p != integer.data() + integer.size()) return std::nullopt;
  return v;
}

bool Literal::contains_float() const {
  if (kind == Kind::Float) return true;
  return std::any_of(items.begin(), items.end(), [](const Literal& x) { return x.contains_float(); });
}

namespace {

std::string normalize_int(std::string digits, bool negative) {
  std::erase(digits, '_');
  auto nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  if (negative && digits != "0") digits.insert(digits.begin(), '-');
  return digits;
}

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view s) : s_(s) {}

  std::optional<Literal> whole() {
    auto v = value();
    skip();
    if (!v || pos_ != s_.size()) return std::nullopt;
    return v;
  }

  std::optional<std::vector<Argument>> arguments() {
    std::vector<Argument> out;
    skip();
    if (pos_ == s_.size()) return out;
    for (;;) {
      Argument a;
      skip();
      std::size_t save = pos_;
      std::string id = identifier();
      skip();
      if (!id.empty() && peek() == '=' && peek(1) != '=') {
        ++pos_;
        a.name = id;
      } else {
        pos_ = save;
      }
      auto v = value();
      if (!v) return std::nullopt;
      a.value = std::move(*v);
      out.push_back(std::move(a));
      skip();
      if (pos_ == s_.size()) return out;
      if (peek() != ',') return std::nullopt;
      ++pos_;
      skip();
      if (pos_ == s_.size()) return out;  // trailing comma
    }
  }

 private:
  std::optional<Literal> value() {
    skip();
    if (pos_ >= s_.size()) return std::nullopt;
    char c = s_[pos_];
    if (c == '[') return sequence(']', Kind::List);
    if (c == '(') return paren();
    if (c == '{') return braces();
    if (c == '\'' || c == '"') return string_lit();
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    std::string id = identifier();
    if (id == "True") return Literal::from_bool(true);
    if (id == "False") return Literal::from_bool(false);
    if (id == "None") return Literal::none();
    if ((id == "r" || id == "R" || id == "b" || id == "u") && pos_ < s_.size() &&
        (s_[pos_] == '\'' || s_[pos_] == '"') && id != "b")
      return string_lit(id == "r" || id == "R");
    return std::nullopt;
  }

  std::optional<Literal> sequence(char close, Kind kind) {
    ++pos_;
    Literal out;
    out.kind = kind;
    skip();
    if (peek() == close) {
      ++pos_;
      return out;
    }
    for (;;) {
      auto v = value();
      if (!v) return std::nullopt;
      out.items.push_back(std::move(*v));
      skip();
      if (peek() == close) {
        ++pos_;
        return out;
      }
      if (peek() != ',') return std::nullopt;
      ++pos_;
      skip();
      if (peek() == close) {
        ++pos_;
        return out;
      }
    }
  }

  std::optional<Literal> paren() {
    ++pos_;
    skip();
    Literal out;
    out.kind = Kind::Tuple;
    if (peek() == ')') {
      ++pos_;
      return out;
    }
    auto first = value();
    if (!first) return std::nullopt;
    skip();
    if (peek() == ')') {  // parenthesized expression, not a tuple
      ++pos_;
      return first;
    }
    out.items.push_back(std::move(*first));
    while (peek() == ',') {
      ++pos_;
      skip();
      if (peek() == ')') break;
      auto v = value();
      if (!v) return std::nullopt;
      out.items.push_back(std::move(*v));
      skip();
    }
    if (peek() != ')') return std::nullopt;
    ++pos_;
    return out;
  }

  std::optional<Literal> braces() {
    ++pos_;
    skip();
    Literal out;
    out.kind = Kind::Dict;
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    bool is_set = false;
    bool first = true;
    for (;;) {
      auto k = value();
      if (!k) return std::nullopt;
      skip();
      if (first) {
        is_set = peek() != ':';
        if (is_set) out.kind = Kind::Set;
        first = false;
      }
      out.items.push_back(std::move(*k));
      if (!is_set) {
        if (peek() != ':') return std::nullopt;
        ++pos_;
        auto v = value();
        if (!v) return std::nullopt;
        out.items.push_back(std::move(*v));
        skip();
      }
      if (peek() == '}') {
        ++pos_;
        return out;
      }
      if (peek() != ',') return std::nullopt;
      ++pos_;
      skip();
      if (peek() == '}') {
        ++pos_;
        return out;
      }
    }
  }

  std::optional<Literal> number() {
    bool negative = false;
    while (peek() == '-' || peek() == '+') {
      if (peek() == '-') negative = !negative;
      ++pos_;
      skip();
    }
    std::size_t start = pos_;
    bool is_float = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        ++pos_;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++pos_;
        if ((c == 'e' || c == 'E') && (peek() == '-' || peek() == '+')) ++pos_;
      } else {
        break;
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    if (text.empty()) {
      // -inf / nan are not literals in Python source; reject
      return std::nullopt;
    }
    if (!is_float) {
      if (!std::all_of(text.begin(), text.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '_'; }))
        return std::nullopt;
      if (text.size() > 1 && text[0] == '0' && text.find_first_not_of("0_") != std::string::npos)
        return std::nullopt;  // 012 is a syntax error in Python 3
      Literal l;
      l.kind = Kind::Int;
      l.integer = normalize_int(text, negative);
      return l;
    }
    std::erase(text, '_');
    double d = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
    Literal l;
    l.kind = Kind::Float;
    l.real = negative ? -d : d;
    return l;
  }

  std::optional<Literal> string_lit(bool raw = false) {
    char q = s_[pos_];
    bool triple = s_.substr(pos_, 3) == std::string(3, q);
    pos_ += triple ? 3 : 1;
    std::string out;
    for (;;) {
      if (pos_ >= s_.size()) return std::nullopt;
      char c = s_[pos_];
      if (triple ? s_.substr(pos_, 3) == std::string(3, q) : c == q) {
        pos_ += triple ? 3 : 1;
        break;
      }
      if (c == '\n' && !triple) return std::nullopt;
      if (c == '\\' && !raw && pos_ + 1 < s_.size()) {
        char e = s_[pos_ + 1];
        pos_ += 2;
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '0': out += '\0'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          case '\n': break;
          case 'x': {
            if (pos_ + 2 > s_.size()) return std::nullopt;
            int v = 0;
            auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + 2, v, 16);
            if (ec != std::errc()) return std::nullopt;
            pos_ += 2;
            out += static_cast<char>(v);
            break;
          }
          default:
            out += '\\';
            out += e;
        }
        continue;
      }
      out += c;
      ++pos_;
    }
    // adjacent string literals concatenate
    std::size_t save = pos_;
    skip();
    if (pos_ < s_.size() && (s_[pos_] == '\'' || s_[pos_] == '"')) {
      auto rest = string_lit();
      if (!rest) return std::nullopt;
      out += rest->str;
    } else {
      pos_ = save;
    }
    return Literal::from_str(std::move(out));
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string repr_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d < 0 ? "-inf" : "inf";
  char buf[64];
  // Python's repr: shortest round-trip digits, positional for 1e-4 <= |d| < 1e16
  const double mag = std::fabs(d);
  if (mag != 0.0 && (mag < 1e-4 || mag >= 1e16)) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::scientific);
    std::string s(buf, p);
    auto e = s.find('e');
    std::string mant = s.substr(0, e), exp = s.substr(e + 1);
    int ev = std::stoi(exp);
    char eb[16];
    std::snprintf(eb, sizeof eb, "e%c%02d", ev < 0 ? '-' : '+', ev < 0 ? -ev : ev);
    return mant + eb;
  }
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string repr_str(const std::string& s) {
  const bool has_single = s.find('\'') != std::string::npos;
  const bool has_double = s.find('"') != std::string::npos;
  const char q = has_single && !has_double ? '"' : '\'';
  std::string out(1, q);
  for (unsigned char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else if (c == '\t') out += "\\t";
    else if (c == '\r') out += "\\r";
    else if (c == static_cast<unsigned char>(q)) { out += '\\'; out += static_cast<char>(c); }
    else if (c < 0x20 || c == 0x7f) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02x", c);
      out += buf;
    } else out += static_cast<char>(c);
  }
  return out + q;
}

bool unordered_equal(const std::vector<Literal>& a, const std::vector<Literal>& b,
                     std::size_t stride) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size() / stride, false);
  for (std::size_t i = 0; i < a.size(); i += stride) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); j += stride) {
      if (used[j / stride]) continue;
      bool same = true;
      for (std::size_t k = 0; k < stride && same; ++k) same = equal(a[i + k], b[j + k]);
      if (same) {
        used[j / stride] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::optional<Literal> parse(std::string_view text) { return LiteralParser(text).whole(); }

std::optional<std::vector<Argument>> parse_arguments(std::string_view text) {
  return LiteralParser(text).arguments();
}

std::string repr(const Literal& v) {
  switch (v.kind) {
    case Kind::None: return "None";
    case Kind::Bool: return v.boolean ? "True" : "False";
    case Kind::Int: return v.integer;
    case Kind::Float: return repr_float(v.real);
    case Kind::Str: return repr_str(v.str);
    case Kind::List:
    case Kind::Tuple:
    case Kind::Set: {
      if (v.kind == Kind::Set && v.items.empty()) return "set()";
      const char* open = v.kind == Kind::List ? "[" : v.kind == Kind::Tuple ? "(" : "{";
      const char* close = v.kind == Kind::List ? "]" : v.kind == Kind::Tuple ? ")" : "}";
      std::string out = open;
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += repr(v.items[i]);
      }
      if (v.kind == Kind::Tuple && v.items.size() == 1) out += ",";
      return out + close;
    }
    case Kind::Dict: {
      std::string out = "{";
      for (std::size_t i = 0; i + 1 < v.items.size(); i += 2) {
        if (i) out += ", ";
        out += repr(v.items[i]) + ": " + repr(v.items[i + 1]);
      }
      return out + "}";
    }
  }
  return "?";
}

bool equal(const Literal& a, const Literal& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::None: return true;
    case Kind::Bool: return a.boolean == b.boolean;
    case Kind::Int: return a.integer == b.integer;
    case Kind::Float: return a.real == b.real || (std::isnan(a.real) && std::isnan(b.real));
    case Kind::Str: return a.str == b.str;
    case Kind::List:
    case Kind::Tuple:
      if (a.items.size() != b.items.size()) return false;
      for (std::size_t i = 0; i < a.items.size(); ++i)
        if (!equal(a.items[i], b.items[i])) return false;
      return true;
    case Kind::Set: return unordered_equal(a.items, b.items, 1);
    case Kind::Dict: return unordered_equal(a.items, b.items, 2);
  }
  return false;
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') quote = c;
    else if (c == '[' || c == '(' || c == '{') ++depth;
    else if (c == ']' || c == ')' || c == '}') --depth;
    else if (c == sep && depth == 0) {
      parts.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.emplace_back(text.substr(start));
  return parts;
}

}  // namespace execbench::pyliteral
