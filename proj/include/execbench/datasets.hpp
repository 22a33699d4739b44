#pragma once

// Problem-set construction: DSL-List with LOC binning, the LLM-List
// generation pipeline, and ingestion of external problems.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "execbench/executor.hpp"
#include "execbench/grammar.hpp"
#include "execbench/llm.hpp"
#include "execbench/problem.hpp"

namespace execbench::datasets {

struct LocBin {
  int lo = 0, hi = 0;  // [lo, hi)
};

class InsufficientBinPopulation : public std::runtime_error {
 public:
  InsufficientBinPopulation(std::string signature, LocBin bin, std::size_t available, std::size_t needed);
  std::string signature;
  LocBin bin;
  std::size_t available;
};

struct DslListConfig {
  std::uint64_t seed = 0;
  std::vector<std::string> signatures{"L(int) -> L(int)", "L(int) -> L(int) -> L(int)"};
  std::vector<int> depths{4, 5};
  int programs_per_cell = 1000;
  std::vector<LocBin> bins{{4, 8}, {8, 12}, {12, 16}, {16, 20}, {20, 24}};
  int per_bin = 10;
  /// Template for every cell; program_type, max_depth and rng_seed are
  /// overwritten.
  grammar::SamplerConfig sampler;
};

/// Ids: dsl<arity>-b<bin>-p<NN>-x<input>, e.g. dsl1-b2-p07-x1.
std::vector<Problem> build_dsl_list(const DslListConfig& config);

struct FunctionSpec {
  std::string header;  // remove(lst, value)
  std::string description;
};

/// Lines of the form `1. "remove(lst, value)": "removes ..."`.
std::vector<FunctionSpec> parse_brainstorm(std::string_view response);
/// JSON array of {header, description}.
std::vector<FunctionSpec> load_fixed_functions(const std::string& path);

std::string brainstorm_prompt();
std::string codegen_prompt(const FunctionSpec& f);
/// `excluded` non-empty appends the exclusion sentence to the instruction.
std::string inputgen_prompt(const std::string& function_name, const std::string& description,
                            const std::string& code, const std::vector<std::string>& excluded = {});
/// Chat turns: the add(a, b) example exchange, then the request.
std::vector<llm::Message> inputgen_messages(const FunctionSpec& f, const std::string& code,
                                            const std::vector<std::string>& excluded);

/// Body of the last ```python fence, or the whole text when there is none.
std::string extract_code(std::string_view response);
/// One input per non-empty line, fence lines dropped.
std::vector<std::string> parse_inputs(std::string_view response);

std::string function_name_of(const std::string& header);

class GenerationRetriesExhausted : public std::runtime_error {
 public:
  explicit GenerationRetriesExhausted(const std::string& function);
  std::string function;
};

struct LlmListConfig {
  std::string fixed_functions_path = "data/fixed_functions.json";
  int inputs_per_function = 3;
  int retry_cap = 5;
};

struct LlmListResult {
  std::vector<Problem> problems;
  std::vector<FunctionSpec> functions;
  std::vector<std::pair<std::string, std::string>> failures;  // header, reason
};

LlmListResult build_llm_list(llm::Client& client, Executor& executor, const LlmListConfig& config);

struct IngestConfig {
  std::size_t min_chars = 100;
  std::size_t max_chars = 800;
  std::uint64_t max_steps = 1000;
};

struct Rejection {
  std::string id;
  std::string reason;
};

struct IngestResult {
  std::vector<Problem> problems;
  std::vector<Rejection> rejections;
};

/// JSONL of {source, function_name, input} with optional id.
IngestResult ingest_external(const std::string& path, Executor& executor, const IngestConfig& config = {});
IngestResult ingest_external(const std::vector<nlohmann::json>& records, Executor& executor,
                             const IngestConfig& config = {});

/// Characters (UTF-8 code points).
std::size_t char_length(std::string_view s);

}  // namespace execbench::datasets
