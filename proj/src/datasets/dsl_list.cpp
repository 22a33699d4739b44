#include <cstdio>
#include <map>
#include <set>

#include "execbench/datasets.hpp"
#include "execbench/rng.hpp"
#include "execbench/transpile.hpp"

namespace execbench::datasets {

namespace {

std::string bin_name(LocBin b) { return "[" + std::to_string(b.lo) + "," + std::to_string(b.hi) + ")"; }

struct Candidate {
  grammar::SampledProgram sampled;
  transpile::ImpProgram program;
};

}  // namespace

InsufficientBinPopulation::InsufficientBinPopulation(std::string sig, LocBin b, std::size_t avail,
                                                     std::size_t needed)
    : std::runtime_error("LOC bin " + bin_name(b) + " of " + sig + " has " + std::to_string(avail) +
                         " programs, " + std::to_string(needed) + " needed"),
      signature(std::move(sig)),
      bin(b),
      available(avail) {}

std::vector<Problem> build_dsl_list(const DslListConfig& config) {
  std::vector<Problem> out;
  for (const auto& signature : config.signatures) {
    const dsl::Type type = dsl::parse_type(signature);
    const int arity = static_cast<int>(dsl::arrow_args(type).size());

    std::vector<Candidate> pool;
    std::set<std::string> seen;
    for (int depth : config.depths) {
      grammar::SamplerConfig sc = config.sampler;
      sc.program_type = type;
      sc.max_depth = depth;
      const auto cfg = grammar::compile(dsl::list_dsl(), sc.constraints, type, depth, sc.weight_overrides);
      Rng rng(derive_seed(config.seed, "dsl-list/" + signature + "/depth" + std::to_string(depth)));

      std::set<std::string> cell;
      const long max_draws = 100L * config.programs_per_cell;
      for (long draws = 0; static_cast<int>(cell.size()) < config.programs_per_cell; ++draws) {
        if (draws == max_draws)
          throw grammar::AttemptsExhausted("could not find " + std::to_string(config.programs_per_cell) +
                                           " distinct programs for " + signature);
        auto sampled = grammar::sample_valid_program(cfg, sc, rng);
        const std::string text = dsl::to_text(sampled.ast);
        if (!cell.insert(text).second) continue;
        if (!seen.insert(text).second) continue;
        auto program = transpile::translate(sampled.ast, "f", arity);
        pool.push_back({std::move(sampled), std::move(program)});
      }
    }

    for (std::size_t b = 0; b < config.bins.size(); ++b) {
      const LocBin bin = config.bins[b];
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i].program.loc >= bin.lo && pool[i].program.loc < bin.hi) members.push_back(i);
      if (members.size() < static_cast<std::size_t>(config.per_bin))
        throw InsufficientBinPopulation(signature, bin, members.size(), static_cast<std::size_t>(config.per_bin));
      Rng rng(derive_seed(config.seed, "dsl-list/" + signature + "/bin" + std::to_string(b)));
      rng.shuffle(members);
      members.resize(static_cast<std::size_t>(config.per_bin));

      for (std::size_t p = 0; p < members.size(); ++p) {
        const Candidate& c = pool[members[p]];
        char program_id[48];
        std::snprintf(program_id, sizeof program_id, "dsl%d-b%zu-p%02zu", arity, b, p);
        for (std::size_t x = 0; x < c.sampled.inputs.size(); ++x) {
          Problem problem;
          problem.id = std::string(program_id) + "-x" + std::to_string(x);
          problem.dataset = "dsl-list";
          problem.source = c.program.source;
          problem.function_name = c.program.function_name;
          problem.input = grammar::input_text(c.sampled.inputs[x]);
          problem.output = c.sampled.outputs[x];
          problem.loc = c.program.loc;
          problem.program_id = program_id;
          problem.dsl = dsl::to_text(c.sampled.ast);
          out.push_back(std::move(problem));
        }
      }
    }
  }
  return out;
}

}  // namespace execbench::datasets
