#pragma once

// Single-token mutation of Python-syntax programs: mutant enumeration,
// filtering on a paired input, and coverage-similar selection.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "execbench/executor.hpp"
#include "execbench/problem.hpp"
#include "execbench/rng.hpp"

namespace execbench::mutate {

struct Token {
  enum Kind { Name, Number, String, Op, Comment } kind;
  std::string text;
  int line = 0;
  std::size_t offset = 0;  // byte offset in the source
};

/// Python tokens (whitespace and newlines dropped).
std::vector<Token> tokenize(std::string_view source);

enum class Kind { Arithmetic, Relational, Logical, Keyword, NumericLiteral };
std::string_view kind_name(Kind k);

struct Site {
  Kind kind = Kind::Arithmetic;
  std::string original;
  std::string replacement;
  int line = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
  int token_index = 0;
};

struct Mutant {
  std::string source;
  Site site;
};

std::vector<Mutant> enumerate_mutants(std::string_view source);

/// True when `mutant` equals `original` except for one mutation-site span.
bool single_span_difference(std::string_view original, std::string_view mutant);

struct Survivor {
  Mutant mutant;
  ExecResponse response;
};

/// Mutants that run without error on `input` and whose output differs from
/// `original_output`.
std::vector<Survivor> filter_valid(const Problem& original, const std::vector<Mutant>& candidates,
                                   Executor& executor);

double jaccard(const std::set<int>& a, const std::set<int>& b);

/// Index of the survivor whose covered lines are most similar to
/// `original_coverage`; ties drawn uniformly with `rng`, independent of the
/// order of `survivors`.
std::size_t select_mutant(const std::set<int>& original_coverage,
                          const std::vector<Survivor>& survivors, Rng& rng);

/// Output equality on canonical reprs (structural when both parse).
bool same_output(const std::string& a, const std::string& b);

struct DatasetMutation {
  std::vector<Problem> kept;
  std::vector<Problem> mutated;
  std::vector<std::pair<std::string, std::string>> dropped;  // id, reason
  std::size_t candidates = 0;
  std::size_t survivors = 0;
};

/// Per-problem rng seeded from (seed, problem id).
DatasetMutation mutate_dataset(const std::vector<Problem>& problems, Executor& executor,
                               std::uint64_t seed);

}  // namespace execbench::mutate
