#include "execbench/mutate.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <tuple>

#include "execbench/pyliteral.hpp"

namespace execbench::mutate {

namespace {

const std::vector<std::string> kArithmetic = {"+", "-", "*", "//", "%"};
const std::vector<std::string> kAugmented = {"+=", "-=", "*=", "//=", "%="};
const std::vector<std::string> kRelational = {"<", "<=", ">", ">=", "==", "!="};

const std::set<std::string, std::less<>> kKeywords = {
    "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in",
    "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try", "while",
    "with", "yield"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (c & 0x80); }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// Token that can end an operand, so a following + or - is binary.
bool ends_operand(const Token& t) {
  switch (t.kind) {
    case Token::Number:
    case Token::String: return true;
    case Token::Name: return !kKeywords.count(t.text);
    case Token::Op: return t.text == ")" || t.text == "]" || t.text == "}";
    case Token::Comment: return false;
  }
  return false;
}

bool decimal_int(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::optional<std::int64_t> int_value(const std::string& s) {
  std::string digits;
  for (char c : s)
    if (c != '_') digits += c;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || p != digits.data() + digits.size()) return std::nullopt;
  return v;
}

std::string splice(std::string_view src, std::size_t off, std::size_t len, const std::string& with) {
  std::string out(src.substr(0, off));
  out += with;
  out += src.substr(off + len);
  return out;
}

// Mutation sites in token order; replacements in family order.
std::vector<Site> sites(std::string_view source, const std::vector<Token>& toks) {
  std::vector<Site> out;
  std::vector<std::size_t> sig;  // indices of non-comment tokens
  for (std::size_t i = 0; i < toks.size(); ++i)
    if (toks[i].kind != Token::Comment) sig.push_back(i);
  auto add = [&](Kind kind, const Token& t, std::size_t offset, std::size_t length,
                 const std::string& original, const std::string& repl, std::size_t index) {
    if (repl == original) return;
    out.push_back({kind, original, repl, t.line, offset, length, static_cast<int>(index)});
  };
  for (std::size_t k = 0; k < sig.size(); ++k) {
    const Token& t = toks[sig[k]];
    const Token* prev = k > 0 ? &toks[sig[k - 1]] : nullptr;
    const bool binary_position = prev && ends_operand(*prev);
    if (t.kind == Token::Op) {
      auto in = [&](const std::vector<std::string>& fam) {
        return std::find(fam.begin(), fam.end(), t.text) != fam.end();
      };
      if (in(kArithmetic) && binary_position) {
        for (const auto& r : kArithmetic) add(Kind::Arithmetic, t, t.offset, t.text.size(), t.text, r, k);
      } else if (in(kAugmented)) {
        for (const auto& r : kAugmented) add(Kind::Arithmetic, t, t.offset, t.text.size(), t.text, r, k);
      } else if (in(kRelational)) {
        for (const auto& r : kRelational) add(Kind::Relational, t, t.offset, t.text.size(), t.text, r, k);
      }
    } else if (t.kind == Token::Name) {
      if (t.text == "and") add(Kind::Logical, t, t.offset, 3, "and", "or", k);
      if (t.text == "or") add(Kind::Logical, t, t.offset, 2, "or", "and", k);
      if (t.text == "continue") add(Kind::Keyword, t, t.offset, 8, "continue", "break", k);
      if (t.text == "break") add(Kind::Keyword, t, t.offset, 5, "break", "continue", k);
    } else if (t.kind == Token::Number && decimal_int(t.text)) {
      auto v = int_value(t.text);
      if (!v) continue;
      std::size_t offset = t.offset;
      std::int64_t n = *v;
      // A unary minus directly applied to the literal belongs to it.
      if (prev && prev->kind == Token::Op && prev->text == "-") {
        const Token* before = k > 1 ? &toks[sig[k - 2]] : nullptr;
        if (!before || !ends_operand(*before)) {
          offset = prev->offset;
          n = -n;
        }
      }
      const std::size_t length = t.offset + t.text.size() - offset;
      const std::string original(source.substr(offset, length));
      if (n > INT64_MIN) add(Kind::NumericLiteral, t, offset, length, original, std::to_string(n - 1), k);
      if (n < INT64_MAX) add(Kind::NumericLiteral, t, offset, length, original, std::to_string(n + 1), k);
    }
  }
  return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\\') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    const int start_line = line;
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      out.push_back({Token::Comment, std::string(s.substr(start, i - start)), start_line, start});
      continue;
    }
    // string, possibly prefixed
    std::size_t q = i;
    while (q < s.size() && q - i < 3 && std::string_view("rRbBuUfF").find(s[q]) != std::string_view::npos) ++q;
    if (q < s.size() && (s[q] == '\'' || s[q] == '"') && (q == i || !ident_char(i > 0 ? s[i - 1] : ' '))) {
      const char quote = s[q];
      const bool triple = q + 2 < s.size() && s[q + 1] == quote && s[q + 2] == quote;
      const bool raw = s.substr(i, q - i).find_first_of("rR") != std::string_view::npos;
      i = q + (triple ? 3 : 1);
      while (i < s.size()) {
        if (s[i] == '\\' && !raw) {
          if (i + 1 < s.size() && s[i + 1] == '\n') ++line;
          i += 2;
          continue;
        }
        if (s[i] == '\\' && raw) {
          i += 2;
          continue;
        }
        if (s[i] == '\n') {
          ++line;
          if (!triple) break;
        }
        if (s[i] == quote) {
          if (!triple) {
            ++i;
            break;
          }
          if (i + 2 < s.size() && s[i + 1] == quote && s[i + 2] == quote) {
            i += 3;
            break;
          }
        }
        ++i;
      }
      out.push_back({Token::String, std::string(s.substr(start, i - start)), start_line, start});
      continue;
    }
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Token::Name, std::string(s.substr(start, i - start)), start_line, start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size()) {
        const char d = s[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          ++i;
        } else if ((d == '+' || d == '-') && (s[i - 1] == 'e' || s[i - 1] == 'E') &&
                   !(s[start] == '0' && start + 1 < s.size() && (s[start + 1] == 'x' || s[start + 1] == 'X'))) {
          ++i;
        } else {
          break;
        }
      }
      out.push_back({Token::Number, std::string(s.substr(start, i - start)), start_line, start});
      continue;
    }
    static const char* ops3[] = {"//=", "**=", ">>=", "<<=", "..."};
    static const char* ops2[] = {"->", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=",
                                 "%=", "&=", "|=", "^=", ":=", "<<", ">>", "@="};
    std::size_t len = 1;
    for (const char* o : ops3)
      if (s.substr(i, 3) == o) len = 3;
    if (len == 1)
      for (const char* o : ops2)
        if (s.substr(i, 2) == o) len = 2;
    out.push_back({Token::Op, std::string(s.substr(i, len)), line, i});
    i += len;
  }
  return out;
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Arithmetic: return "arithmetic";
    case Kind::Relational: return "relational";
    case Kind::Logical: return "logical";
    case Kind::Keyword: return "keyword";
    case Kind::NumericLiteral: return "numeric_literal";
  }
  return "";
}

std::vector<Mutant> enumerate_mutants(std::string_view source) {
  const auto toks = tokenize(source);
  std::vector<Mutant> out;
  for (auto& site : sites(source, toks))
    out.push_back({splice(source, site.offset, site.length, site.replacement), std::move(site)});
  return out;
}

bool single_span_difference(std::string_view original, std::string_view mutant) {
  for (const auto& s : sites(original, tokenize(original)))
    if (splice(original, s.offset, s.length, s.replacement) == mutant) return true;
  return false;
}

bool same_output(const std::string& a, const std::string& b) {
  if (a == b) return true;
  auto x = pyliteral::parse(a);
  auto y = pyliteral::parse(b);
  if (x && y) return pyliteral::equal(*x, *y);
  return false;
}

std::vector<Survivor> filter_valid(const Problem& original, const std::vector<Mutant>& candidates,
                                   Executor& executor) {
  std::vector<Survivor> out;
  for (const auto& m : candidates) {
    auto r = executor.run({m.source, original.function_name, original.input, true});
    if (!r.ok() || same_output(r.output_repr, original.output)) continue;
    out.push_back({m, std::move(r)});
  }
  return out;
}

double jaccard(const std::set<int>& a, const std::set<int>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (int x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

std::size_t select_mutant(const std::set<int>& original_coverage,
                          const std::vector<Survivor>& survivors, Rng& rng) {
  if (survivors.empty()) throw std::invalid_argument("select_mutant: no survivors");
  // Exact comparison of inter/union as integer fractions.
  struct Score {
    std::size_t inter, uni;
  };
  auto score = [&](const Survivor& s) {
    const auto& c = s.response.covered_lines;
    std::size_t inter = 0;
    for (int x : original_coverage) inter += c.count(x);
    std::size_t uni = original_coverage.size() + c.size() - inter;
    if (uni == 0) return Score{1, 1};
    return Score{inter, uni};
  };
  std::vector<std::size_t> best;
  Score top{0, 1};
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    Score s = score(survivors[i]);
    const auto lhs = s.inter * top.uni, rhs = top.inter * s.uni;
    if (best.empty() || lhs > rhs) {
      best = {i};
      top = s;
    } else if (lhs == rhs) {
      best.push_back(i);
    }
  }
  std::sort(best.begin(), best.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = survivors[a].mutant.site;
    const auto& y = survivors[b].mutant.site;
    return std::tie(x.line, x.offset, x.replacement) < std::tie(y.line, y.offset, y.replacement);
  });
  return best[best.size() == 1 ? 0 : rng.below(best.size())];
}

DatasetMutation mutate_dataset(const std::vector<Problem>& problems, Executor& executor,
                               std::uint64_t seed) {
  DatasetMutation out;
  for (const auto& p : problems) {
    Rng rng(derive_seed(seed, p.id));
    auto base = executor.run({p.source, p.function_name, p.input, true});
    if (!base.ok()) {
      out.dropped.emplace_back(p.id, "original does not execute: " + base.error_kind);
      continue;
    }
    if (!same_output(base.output_repr, p.output)) {
      out.dropped.emplace_back(p.id, "original output does not match ground truth");
      continue;
    }
    auto candidates = enumerate_mutants(p.source);
    out.candidates += candidates.size();
    auto survivors = filter_valid(p, candidates, executor);
    out.survivors += survivors.size();
    if (survivors.empty()) {
      out.dropped.emplace_back(p.id, candidates.empty() ? "no mutation sites" : "no valid mutant");
      continue;
    }
    const auto& chosen = survivors[select_mutant(base.covered_lines, survivors, rng)];
    Problem m = p;
    m.source = chosen.mutant.source;
    m.output = chosen.response.output_repr;
    const auto& site = chosen.mutant.site;
    m.mutation = MutationInfo{std::string(kind_name(site.kind)), site.line, site.original, site.replacement};
    out.kept.push_back(p);
    out.mutated.push_back(std::move(m));
  }
  return out;
}

}  // namespace execbench::mutate
