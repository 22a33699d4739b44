#include <cctype>
#include <fstream>
#include <regex>

#include "execbench/datasets.hpp"
#include "execbench/pyliteral.hpp"
#include "execbench/transpile.hpp"

namespace execbench::datasets {

using nlohmann::json;

namespace {

const char* const kBrainstorm =
    R"(Your task is to brainstorm a list of 100 known / common list functions in Python. These could be standard textbook algorithms or simple utility functions. Some examples are length, reverse, unique, compact, flatten, insert, index, union, tail, permutations, order-by, mean, median, range, argmax.

Each function you come up with must satisfy the following conditions:
- Takes in a list of integers as one of the parameters and returns a list, integer, or boolean after doing some processing on the input.
- Does NOT contain random operations.
- Does NOT involve substantial floating-point operations.
- Does NOT rely on any imports (e.g., numpy or the Python standard library).

Try to have as much variability in the types of operations; for any class or variations of operations, have at most 2-3. Structure your response in the following manner. The name should be a function signature (e.g., length(lst)), and the description should encapsulate the expected behavior of the function.

1. "[name]": "[description]"
2. "[name]": "[description]"
3. "[name]": "[description]"
...)";

const char* const kCodegen =
    R"(Your task is to write a Python function `@{function_header}@` that @{function_description}@. You may use built-ins, but limit your usage so the function has enough logic in it; you are not allowed to use numpy. Make the logic in your function as explicit as possible, and make sure that the result returned by your function is deterministic. Do not include comments, and do not output any extra information.)";

const char* const kInputgen =
    R"(You are given a Python function named `@{function_name}@` below, which @{function_description}@. Your goal is to generate 3 simple test inputs for this function that comprehensively test all functionality of the `@{function_name}@` function and produce no errors when executed. Do NOT include any extra information and put each input on a separate line. If the input contains multiple arguments, separate them by commas. Do NOT include floating-point values. Make sure that lists contain only a few elements, but are not empty.@{exclusion}@

```python
@{function_code}@
```)";

const char* const kExampleCode = "def add(a, b):\n    return a + b";
const char* const kExampleDescription = "returns the sum of two numbers";
const char* const kExampleAnswer = "3, 5\n-2, 7\n0, 0";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size())
    text.replace(pos, from.size(), to);
  return text;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

// Reason an input is unusable, or empty when it is fine.
std::string check_input(const std::string& input, const std::string& code, const std::string& function_name,
                        Executor& executor, std::string& output) {
  auto args = pyliteral::parse_arguments(input);
  if (!args) return "not a literal argument list";
  for (const auto& a : *args)
    if (a.value.contains_float()) return "floating-point input";
  auto r = executor.run({code, function_name, input, false});
  if (!r.ok()) return r.error_kind.empty() ? std::string(status_name(r.status)) : r.error_kind;
  auto value = pyliteral::parse(r.output_repr);
  if (value && value->contains_float()) return "floating-point output";
  output = r.output_repr;
  return "";
}

}  // namespace

GenerationRetriesExhausted::GenerationRetriesExhausted(const std::string& fn)
    : std::runtime_error("input generation retries exhausted for " + fn), function(fn) {}

std::vector<FunctionSpec> parse_brainstorm(std::string_view response) {
  static const std::regex line_re(R"re(^\s*\d+\.\s*"([^"]+)"\s*:\s*"(.*)"\s*,?\s*$)re");
  std::vector<FunctionSpec> out;
  std::string text(response);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::smatch m;
    const std::string line = text.substr(start, end - start);
    if (std::regex_match(line, m, line_re)) out.push_back({m[1].str(), m[2].str()});
    start = end + 1;
  }
  return out;
}

std::vector<FunctionSpec> load_fixed_functions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j = json::parse(in);
  std::vector<FunctionSpec> out;
  for (const auto& e : j) out.push_back({e.at("header").get<std::string>(), e.at("description").get<std::string>()});
  return out;
}

std::string brainstorm_prompt() { return kBrainstorm; }

std::string codegen_prompt(const FunctionSpec& f) {
  std::string t = replace_all(kCodegen, "@{function_header}@", f.header);
  return replace_all(t, "@{function_description}@", f.description);
}

std::string inputgen_prompt(const std::string& function_name, const std::string& description,
                            const std::string& code, const std::vector<std::string>& excluded) {
  std::string exclusion;
  if (!excluded.empty()) {
    exclusion = " Do NOT include the following inputs: ";
    for (std::size_t i = 0; i < excluded.size(); ++i) exclusion += (i ? ", " : "") + excluded[i];
  }
  std::string t = replace_all(kInputgen, "@{function_name}@", function_name);
  t = replace_all(t, "@{function_description}@", description);
  t = replace_all(t, "@{exclusion}@", exclusion);
  return replace_all(t, "@{function_code}@", strip_trailing_newlines(code));
}

std::vector<llm::Message> inputgen_messages(const FunctionSpec& f, const std::string& code,
                                            const std::vector<std::string>& excluded) {
  return {{"user", inputgen_prompt("add", kExampleDescription, kExampleCode)},
          {"assistant", kExampleAnswer},
          {"user", inputgen_prompt(function_name_of(f.header), f.description, code, excluded)}};
}

std::string extract_code(std::string_view response) {
  const std::string text(response);
  auto open = text.rfind("```python");
  std::size_t body = std::string::npos;
  if (open != std::string::npos) {
    body = text.find('\n', open);
  } else if ((open = text.find("```")) != std::string::npos) {
    body = text.find('\n', open);
  }
  if (body == std::string::npos) return strip_trailing_newlines(trim(text)) + "\n";
  auto close = text.find("```", body);
  std::string code = text.substr(body + 1, close == std::string::npos ? std::string::npos : close - body - 1);
  return strip_trailing_newlines(code) + "\n";
}

std::vector<std::string> parse_inputs(std::string_view response) {
  std::vector<std::string> out;
  std::string text(response);
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.rfind("```", 0) == 0) continue;
    out.push_back(line);
  }
  return out;
}

std::string function_name_of(const std::string& header) { return trim(header.substr(0, header.find('('))); }

LlmListResult build_llm_list(llm::Client& client, Executor& executor, const LlmListConfig& config) {
  LlmListResult result;
  auto brainstorm = client.complete_one({{"user", brainstorm_prompt()}}, 0, "brainstorm");
  if (!brainstorm.ok) throw std::runtime_error("brainstorm request failed: " + brainstorm.error);
  result.functions = parse_brainstorm(brainstorm.text);
  for (auto& f : load_fixed_functions(config.fixed_functions_path)) result.functions.push_back(std::move(f));

  for (std::size_t index = 0; index < result.functions.size(); ++index) {
    const FunctionSpec& f = result.functions[index];
    const std::string name = function_name_of(f.header);
    auto generated = client.complete_one({{"user", codegen_prompt(f)}}, 0, "codegen:" + name);
    if (!generated.ok) {
      result.failures.push_back({f.header, "code generation failed: " + generated.error});
      continue;
    }
    const std::string code = extract_code(generated.text);

    std::vector<std::string> excluded;
    std::vector<std::pair<std::string, std::string>> accepted;  // input, output
    bool done = false;
    for (int attempt = 0; attempt <= config.retry_cap && !done; ++attempt) {
      auto reply = client.complete_one(inputgen_messages(f, code, excluded), attempt, "inputgen:" + name);
      if (!reply.ok) continue;
      accepted.clear();
      bool bad = false;
      for (const auto& input : parse_inputs(reply.text)) {
        if (static_cast<int>(accepted.size()) == config.inputs_per_function) break;
        std::string output;
        if (check_input(input, code, name, executor, output).empty()) {
          accepted.push_back({input, output});
        } else {
          bad = true;
          excluded.push_back(input);
        }
      }
      done = !bad && static_cast<int>(accepted.size()) == config.inputs_per_function;
    }
    if (!done) {
      result.failures.push_back({f.header, GenerationRetriesExhausted(f.header).what()});
      continue;
    }

    char program_id[32];
    std::snprintf(program_id, sizeof program_id, "llm-%03zu", index);
    for (std::size_t x = 0; x < accepted.size(); ++x) {
      Problem p;
      p.id = std::string(program_id) + "-x" + std::to_string(x);
      p.dataset = "llm-list";
      p.source = code;
      p.function_name = name;
      p.input = accepted[x].first;
      p.output = accepted[x].second;
      p.loc = transpile::loc(code);
      p.executor = executor.kind();
      p.program_id = program_id;
      result.problems.push_back(std::move(p));
    }
  }
  return result;
}

}  // namespace execbench::datasets
