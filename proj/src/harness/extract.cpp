#include <cctype>
#include <regex>

#include "execbench/harness.hpp"

namespace execbench::harness {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Index just past the bracket matching s[open], skipping string literals.
std::size_t match_bracket(std::string_view s, std::size_t open) {
  const char o = s[open];
  const char c = o == '(' ? ')' : o == '[' ? ']' : '}';
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '\'' || ch == '"') {
      for (++i; i < s.size() && s[i] != ch; ++i)
        if (s[i] == '\\') ++i;
      continue;
    }
    if (ch == o) ++depth;
    if (ch == c && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

// Like match_bracket for JSON objects, where only double quotes delimit strings.
std::size_t match_json_object(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '"') {
      for (++i; i < s.size() && s[i] != '"'; ++i)
        if (s[i] == '\\') ++i;
      continue;
    }
    if (ch == '{') ++depth;
    if (ch == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

std::optional<char> normalize_letter(std::string s) {
  std::string t;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c))) t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (t.rfind("PROGRAM", 0) == 0) t = t.substr(7);
  if (t == "A" || t == "B") return t[0];
  return std::nullopt;
}

}  // namespace

std::optional<pyliteral::Literal> parse_assertion(std::string_view text) {
  auto at = text.rfind("assert");
  if (at == std::string_view::npos) return std::nullopt;
  std::string_view s = text.substr(at + 6);
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  const std::size_t name_start = i;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.')) ++i;
  if (i == name_start) return std::nullopt;
  while (i < s.size() && s[i] == ' ') ++i;
  if (i >= s.size() || s[i] != '(') return std::nullopt;
  const std::size_t close = match_bracket(s, i);
  if (close == std::string_view::npos) return std::nullopt;
  std::string_view rest = trim(s.substr(close));
  if (rest.substr(0, 2) != "==") return std::nullopt;
  return pyliteral::parse(trim(rest.substr(2)));
}

std::optional<pyliteral::Literal> extract_prediction(std::string_view response) {
  auto open = response.rfind("[ANSWER]");
  if (open == std::string_view::npos) return std::nullopt;
  auto body_start = open + 8;
  auto close = response.find("[/ANSWER]", body_start);
  if (close == std::string_view::npos) return std::nullopt;
  std::string_view body = trim(response.substr(body_start, close - body_start));
  // the assertion may be wrapped in a code fence or preceded by text
  auto at = body.rfind("assert ");
  if (at == std::string_view::npos) return std::nullopt;
  std::string_view line = body.substr(at);
  auto fence = line.find("```");
  if (fence != std::string_view::npos) line = line.substr(0, fence);
  return parse_assertion(trim(line));
}

ChoiceAnswer extract_choice(std::string_view response) {
  ChoiceAnswer out;
  for (std::size_t pos = response.rfind('{'); pos != std::string_view::npos;
       pos = pos == 0 ? std::string_view::npos : response.rfind('{', pos - 1)) {
    const std::size_t end = match_json_object(response, pos);
    if (end == std::string_view::npos) continue;
    json j = json::parse(response.substr(pos, end - pos), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("chosen_program")) continue;
    const auto& c = j["chosen_program"];
    if (c.is_string()) out.letter = normalize_letter(c.get<std::string>());
    if (j.contains("assertion") && j["assertion"].is_string())
      out.value = parse_assertion(j["assertion"].get<std::string>());
    return out;
  }
  // Not valid JSON (e.g. single-quoted assertion strings); read fields directly.
  static const std::regex letter_re(R"re("chosen_program"\s*:\s*"?\s*(?:[Pp]rogram[ _]?)?([ABab])\b)re");
  static const std::regex assertion_re(R"re("assertion"\s*:\s*"((?:[^"\\]|\\.)*)")re");
  std::string text(response);
  std::smatch m;
  std::string::const_iterator from = text.begin();
  std::optional<char> letter;
  while (std::regex_search(from, text.cend(), m, letter_re)) {
    letter = static_cast<char>(std::toupper(static_cast<unsigned char>(m[1].str()[0])));
    from = m[0].second;
  }
  out.letter = letter;
  from = text.begin();
  std::optional<std::string> assertion;
  while (std::regex_search(from, text.cend(), m, assertion_re)) {
    assertion = m[1].str();
    from = m[0].second;
  }
  if (assertion) {
    json unescaped = json::parse("\"" + *assertion + "\"", nullptr, false);
    out.value = parse_assertion(unescaped.is_string() ? unescaped.get<std::string>() : *assertion);
  }
  return out;
}

std::string_view judgment_name(Judgment j) {
  switch (j) {
    case Judgment::Correct: return "correct";
    case Judgment::Reverted: return "reverted";
    case Judgment::Other: return "other";
    case Judgment::Unparsed: return "unparsed";
  }
  return "unparsed";
}

Judgment parse_judgment(std::string_view s) {
  if (s == "correct") return Judgment::Correct;
  if (s == "reverted") return Judgment::Reverted;
  if (s == "other") return Judgment::Other;
  if (s == "unparsed") return Judgment::Unparsed;
  throw std::invalid_argument("unknown judgment '" + std::string(s) + "'");
}

Judgment judge(const std::optional<pyliteral::Literal>& answer, const std::string& own_truth,
               const std::string& other_truth) {
  if (!answer) return Judgment::Unparsed;
  auto own = pyliteral::parse(own_truth);
  if (own && pyliteral::equal(*answer, *own)) return Judgment::Correct;
  auto other = pyliteral::parse(other_truth);
  if (other && pyliteral::equal(*answer, *other)) return Judgment::Reverted;
  return Judgment::Other;
}

}  // namespace execbench::harness
