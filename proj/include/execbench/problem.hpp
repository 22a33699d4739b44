#pragma once

// Problem records and their JSONL persistence.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace execbench {

struct MutationInfo {
  std::string kind;
  int line = 0;
  std::string original_token;
  std::string replacement_token;

  friend bool operator==(const MutationInfo&, const MutationInfo&) = default;
};

struct Problem {
  std::string id;
  std::string dataset;  // dsl-list | llm-list | external
  std::string source;
  std::string function_name = "f";
  std::string input;   // call-argument literal text
  std::string output;  // canonical repr of the ground truth
  int loc = 0;
  std::string executor = "builtin";
  std::optional<MutationInfo> mutation;
  std::string program_id;  // shared by the inputs of one program
  std::string dsl;         // s-expression, DSL-List only

  /// Ground truth is True or False.
  bool bool_output() const { return output == "True" || output == "False"; }

  friend bool operator==(const Problem&, const Problem&) = default;
};

nlohmann::json to_json(const Problem& p);
Problem problem_from_json(const nlohmann::json& j);

std::vector<Problem> load_problems(const std::string& path);
/// Writes to a temporary file and renames it into place.
void save_problems(const std::string& path, const std::vector<Problem>& problems);

/// Appends a line to a JSONL file, flushing it.
void append_jsonl(const std::string& path, const nlohmann::json& j);
std::vector<nlohmann::json> read_jsonl(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace execbench
