#pragma once

// Weighted context-free grammar compiled from the list DSL, plus the
// program and input samplers built on it.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "execbench/dsl.hpp"
#include "execbench/rng.hpp"

namespace execbench::grammar {

using Count = unsigned __int128;

/// Context flags carried by nonterminals.
enum Flag : std::uint8_t {
  kNoFlags = 0,
  kNoLiteral = 1,    // int: integer literals excluded
  kNoEmpty = 2,      // list: `empty` excluded
  kAllowMinus1 = 4,  // int: -1 admitted
};

struct NonTerminal {
  dsl::Type type;  // an Arrow type marks a map function slot
  int depth = 0;   // maximum depth of derived terms
  std::uint8_t flags = kNoFlags;

  std::string str() const;
};

struct Production {
  dsl::NodeKind kind = dsl::NodeKind::Prim;
  dsl::Prim prim = dsl::Prim::Empty;
  int value = 0;              // literal value or parameter index
  std::vector<int> children;  // nonterminal ids
  double weight = 1.0;
  bool partial = false;

  std::string str() const;
};

class EmptyLanguage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AttemptsExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cfg {
  std::vector<NonTerminal> nonterminals;
  std::vector<std::vector<Production>> productions;
  std::vector<Count> counts;  // derivations per nonterminal, saturating
  int start = -1;
  dsl::Type program_type;
  int max_depth = 0;
  int param_count = 0;

  /// Id of the nonterminal, or -1.
  int find(const dsl::Type& type, int depth, std::uint8_t flags = kNoFlags) const;
  Count derivations() const { return counts.at(start); }
};

/// Weight overrides are keyed by primitive name (`if`, `map`, ...) or
/// `literal` / `param`. A zero weight removes the productions.
Cfg compile(const dsl::ListDsl& dsl, const dsl::ConstraintSet& constraints,
            const dsl::Type& program_type, int max_depth,
            const std::map<std::string, double>& weight_overrides = {});

std::string to_string(Count c);

struct SamplerConfig {
  dsl::Type program_type = dsl::parse_type("L(int) -> L(int)");
  int max_depth = 4;
  std::map<std::string, double> weight_overrides;
  std::uint64_t rng_seed = 0;
  int input_count = 3;
  int list_len_lo = 3;
  int list_len_hi = 5;
  int element_lo = 0;
  int element_hi = 5;
  int max_attempts = 10'000;
  dsl::ConstraintSet constraints;
};

/// One input: a list of ints per parameter.
using Input = std::vector<std::vector<std::int64_t>>;

/// `[1, 2], [3, 4]`
std::string input_text(const Input& in);

/// Top-down draw from `start` (or from `nonterminal` when given).
dsl::Node sample(const Cfg& cfg, Rng& rng, int nonterminal = -1);
/// Draw seeded by `config.rng_seed`.
dsl::Node sample(const Cfg& cfg, const SamplerConfig& config);

std::vector<Input> sample_inputs(const dsl::Type& program_type, const SamplerConfig& config,
                                 Rng& rng);

/// Runs a program on inputs; returns the output reprs, or nullopt if any
/// input raises.
using Runner = std::function<std::optional<std::vector<std::string>>(
    const dsl::Node&, const std::vector<Input>&)>;

/// Translate-and-interpret runner.
Runner builtin_runner();

struct SampledProgram {
  dsl::Node ast;
  std::vector<Input> inputs;
  std::vector<std::string> outputs;
  int attempts = 0;
};

/// Rejection-samples until a program satisfies the sample-time rules, runs
/// without error on all inputs and does not give the same output for all.
SampledProgram sample_valid_program(const Cfg& cfg, const SamplerConfig& config, Rng& rng,
                                    const Runner& runner = builtin_runner());

}  // namespace execbench::grammar
