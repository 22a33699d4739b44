#pragma once

// Execution-prediction and execution-choice experiments: prompts, answer
// extraction, judging and resumable runs.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "execbench/llm.hpp"
#include "execbench/problem.hpp"
#include "execbench/pyliteral.hpp"

namespace execbench::harness {

enum class PromptMode { ZeroShot, OneShot };
PromptMode parse_prompt_mode(std::string_view s);
std::string_view prompt_mode_name(PromptMode m);
/// Zero-shot for reasoning and effort-based profiles, one-shot otherwise.
PromptMode default_prompt_mode(const std::string& profile);

/// Which variant is shown as program A.
enum class Order { OriginalFirst, MutatedFirst };

std::string prediction_prompt(const Problem& problem, PromptMode mode);
std::string choice_prompt(const Problem& original, const Problem& mutated, Order order,
                          PromptMode mode);

/// Right-hand side of `assert name(args) == <literal>`; nullopt when it is
/// not a pure literal.
std::optional<pyliteral::Literal> parse_assertion(std::string_view assertion);

/// Literal from the last [ANSWER]...[/ANSWER] span.
std::optional<pyliteral::Literal> extract_prediction(std::string_view response);

struct ChoiceAnswer {
  std::optional<char> letter;  // 'A' or 'B'
  std::optional<pyliteral::Literal> value;
};
/// From the last JSON object carrying `chosen_program`.
ChoiceAnswer extract_choice(std::string_view response);

enum class Judgment { Correct, Reverted, Other, Unparsed };
std::string_view judgment_name(Judgment j);
Judgment parse_judgment(std::string_view s);

Judgment judge(const std::optional<pyliteral::Literal>& answer, const std::string& own_truth,
               const std::string& other_truth);

struct PredictionRecord {
  std::string problem_id;
  std::string variant;  // original | mutated
  int sample = 0;
  std::string model;
  std::string dataset;
  int loc = 0;
  bool bool_output = false;
  std::string response;
  std::optional<std::string> extracted;  // repr of the parsed literal
  Judgment judgment = Judgment::Unparsed;
  bool unanswered = false;

  nlohmann::json to_json() const;
  static PredictionRecord from_json(const nlohmann::json& j);
};

struct ChoiceRecord {
  std::string problem_id;
  int run = 1;
  std::string order;   // A=original | A=mutated
  std::string chosen;  // original | mutated | unparsed
  std::string model;
  std::string dataset;
  int loc = 0;
  bool bool_output = false;
  std::string response;
  std::optional<std::string> extracted;
  Judgment judgment = Judgment::Unparsed;
  bool unanswered = false;

  nlohmann::json to_json() const;
  static ChoiceRecord from_json(const nlohmann::json& j);
};

struct RunOptions {
  int n = 5;
  PromptMode mode = PromptMode::ZeroShot;
  std::string records_path;  // append-only; existing records are kept and skipped
  std::size_t limit = 0;     // first `limit` pairs only; 0 = all
};

/// Pairs are matched by id; unmatched problems are ignored.
std::vector<PredictionRecord> run_prediction(const std::vector<Problem>& originals,
                                             const std::vector<Problem>& mutated,
                                             llm::Client& client, const RunOptions& options);

std::vector<ChoiceRecord> run_choice(const std::vector<Problem>& originals,
                                     const std::vector<Problem>& mutated, llm::Client& client,
                                     const RunOptions& options);

std::vector<PredictionRecord> load_prediction_records(const std::string& path);
std::vector<ChoiceRecord> load_choice_records(const std::string& path);

}  // namespace execbench::harness
