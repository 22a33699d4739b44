#include <stdexcept>

#include "execbench/harness.hpp"

namespace execbench::harness {

namespace {

constexpr std::string_view kPredictionZeroShot =
    R"TXT(You are given a Python program and an assertion containing an input to a function. Replace the ?? in the assertion with a literal (no unsimplified expressions, no function calls) representing the function's return value for the given input. Execute the program exactly as written, even if it is incorrect or incomplete. For your final answer, provide the full assertion in [ANSWER] and [/ANSWER] tags.

[PYTHON]
@{program}@
assert @{function_name}@(@{input}@) == ??
[/PYTHON])TXT";

constexpr std::string_view kPredictionOneShot =
    R"TXT(You are given a Python program and an assertion containing an input to a function. Replace the ?? in the assertion with a literal (no unsimplified expressions, no function calls) representing the function's return value for the given input. Execute the program exactly as written, even if it is incorrect or incomplete. Execute the program step by step before arriving at an answer, and provide the full assertion with the function output in [ANSWER] and [/ANSWER] tags, following the example.

[PYTHON]
def performOperation(s):
    s = s + s
    return "b" + s + "a"
assert performOperation(s = "hi") == ??
[/PYTHON]
[THOUGHT]
Let's execute the code step by step:

1. The function performOperation is defined, which takes a single argument s.
2. The function is called with the argument "hi", so within the function, s is initially "hi".
3. Inside the function, s is concatenated with itself, so s becomes "hihi".
4. The function then returns a new string that starts with "b", followed by the value of s (which is now "hihi"), and ends with "a".
5. The return value of the function is therefore "bhihia".
[/THOUGHT]
[ANSWER]
assert performOperation(s = "hi") == "bhihia"
[/ANSWER]

[PYTHON]
@{program}@
assert @{function_name}@(@{input}@) == ??
[/PYTHON])TXT";

constexpr std::string_view kChoiceZeroShot =
    R"TXT(You are given two Python programs below and an assertion containing an input to a function. First, choose either program, whichever one you are more confident in reasoning about. Then, replace the ?? in the assertion with a literal (no unsimplified expressions, no function calls) representing the function's return value for the given input on your chosen program. Execute the program exactly as written, even if it is incorrect or incomplete. For your final answer, output the letter of your chosen program (A or B) and the full assertion in the following json format:
{
    "chosen_program": chosen_program_letter,
    "assertion": full_assertion
}

[PROGRAM_A]
@{program_a}@
[/PROGRAM_A]
[PROGRAM_B]
@{program_b}@
[/PROGRAM_B]
[ASSERTION]
assert @{function_name}@(@{input}@) == ??
[/ASSERTION])TXT";

constexpr std::string_view kChoiceOneShot =
    R"TXT(You are given two Python programs below and an assertion containing an input to a function. First, choose either program, whichever one you are more confident in reasoning about. Then, replace the ?? in the assertion with a literal (no unsimplified expressions, no function calls) representing the function's return value for the given input on your chosen program. Execute the program exactly as written, even if it is incorrect or incomplete. Execute the program step by step before arriving at an answer, then output the letter of your chosen program (A or B) and the full assertion in the following json format:
{
    "chosen_program": chosen_program_letter,
    "assertion": full_assertion
}

# Example
[PROGRAM_A]
def performOperation(s):
    first = s[0].upper()
    rest = s[1:].upper()
    return first + rest
[/PROGRAM_A]
[PROGRAM_B]
def performOperation(s):
    first = s[0].upper()
    rest = s[1:].lower()
    return first + rest
[/PROGRAM_B]
[ASSERTION]
assert performOperation(s = 'hELLO') == ??
[/ASSERTION]
[THOUGHT]
First, let's figure out which program I am more confident in reasoning about.

Looking at programs A and B, the difference is in the expression for rest. Program A defines rest as s[1:].upper() while program B defines rest as s[1:].lower(). Program B looks similar to how one might implement the capitalize() function, so I will choose program B as I am more confident in reasoning about this program behavior. 

Now, let's execute the code step by step:

1. The function performOperation is defined, which takes a single argument s.
2. The function is called with the argument 'hELLO', so within the function, s is initially 'hELLO'.
3. The variable first is defined as the upper case of the first character of s, which is 'H'.
4. The variable rest is defined as the lower case of s[1:], which is 'ello'.
4. The function returns first ('H') concatenated with rest ('ello').
5. The return value of the function is therefore 'Hello'.
[/THOUGHT]
{
    "chosen_program": "B",
    "assertion": "assert performOperation(s = 'hELLO') == 'Hello'"
}

# Question
[PROGRAM_A]
@{program_a}@
[/PROGRAM_A]
[PROGRAM_B]
@{program_b}@
[/PROGRAM_B]
[ASSERTION]
assert @{function_name}@(@{input}@) == ??
[/ASSERTION])TXT";

std::string program_text(const std::string& source) {
  std::string s = source;
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

std::string fill(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl.compare(i, 2, "@{") == 0) {
      auto end = tmpl.find("}@", i + 2);
      if (end != std::string_view::npos) {
        const std::string name(tmpl.substr(i + 2, end - i - 2));
        bool found = false;
        for (const auto& [k, v] : vars)
          if (k == name) {
            out += v;
            found = true;
          }
        if (!found) throw std::logic_error("unbound template variable " + name);
        i = end + 2;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

}  // namespace

PromptMode parse_prompt_mode(std::string_view s) {
  if (s == "zero-shot" || s == "zero_shot") return PromptMode::ZeroShot;
  if (s == "one-shot" || s == "one_shot") return PromptMode::OneShot;
  throw std::invalid_argument("unknown prompt mode '" + std::string(s) + "'");
}

std::string_view prompt_mode_name(PromptMode m) { return m == PromptMode::ZeroShot ? "zero-shot" : "one-shot"; }

PromptMode default_prompt_mode(const std::string& profile) {
  return profile == "traditional" ? PromptMode::OneShot : PromptMode::ZeroShot;
}

std::string prediction_prompt(const Problem& p, PromptMode mode) {
  return fill(mode == PromptMode::ZeroShot ? kPredictionZeroShot : kPredictionOneShot,
              {{"program", program_text(p.source)}, {"function_name", p.function_name}, {"input", p.input}});
}

std::string choice_prompt(const Problem& original, const Problem& mutated, Order order, PromptMode mode) {
  const Problem& a = order == Order::OriginalFirst ? original : mutated;
  const Problem& b = order == Order::OriginalFirst ? mutated : original;
  return fill(mode == PromptMode::ZeroShot ? kChoiceZeroShot : kChoiceOneShot,
              {{"program_a", program_text(a.source)},
               {"program_b", program_text(b.source)},
               {"function_name", original.function_name},
               {"input", original.input}});
}

}  // namespace execbench::harness
