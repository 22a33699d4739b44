// Acceptance checks; one PASS/FAIL line per criterion.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "execbench/datasets.hpp"
#include "execbench/dsl_eval.hpp"
#include "execbench/grammar.hpp"
#include "execbench/harness.hpp"
#include "execbench/metrics.hpp"
#include "execbench/mutate.hpp"
#include "execbench/transpile.hpp"
#include "support/differential.hpp"

using namespace execbench;

namespace {

constexpr double kOracleSeconds = 60;
constexpr double kConstraintSeconds = 60;
constexpr double kEndToEndSeconds = 120;
constexpr double kChiSquareAlpha = 0.001;
constexpr int kTieLo = 40, kTieHi = 60;
constexpr int kSamples = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<std::string> kSignatures = {"L(int) -> L(int)", "L(int) -> L(int) -> L(int)"};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared corpus for criteria 3, 4, 8-10.
struct Corpus {
  std::vector<Problem> problems;
  mutate::DatasetMutation mutation;
};

Corpus& corpus() {
  static Corpus c = [] {
    Corpus out;
    datasets::DslListConfig cfg;
    cfg.seed = 1;
    out.problems = datasets::build_dsl_list(cfg);
    BuiltinExecutor ex;
    out.mutation = mutate::mutate_dataset(out.problems, ex, 7);
    return out;
  }();
  return c;
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  long pairs = 0, mismatches = 0, errors = 0;
  for (const auto& sig : kSignatures) {
    for (int depth : {4, 5}) {
      grammar::SamplerConfig sc;
      sc.program_type = dsl::parse_type(sig);
      sc.max_depth = depth;
      const auto cfg = grammar::compile(dsl::list_dsl(), sc.constraints, sc.program_type, depth);
      const int arity = static_cast<int>(dsl::arrow_args(sc.program_type).size());
      Rng rng(derive_seed(3, "oracle/" + sig + "/" + std::to_string(depth)));
      for (int k = 0; k < 250; ++k) {
        const auto ast = grammar::sample(cfg, rng);
        const auto prog = transpile::translate(ast, "f", arity);
        for (const auto& in : grammar::sample_inputs(sc.program_type, sc, rng)) {
          std::vector<minipy::Value> args;
          std::vector<dsl::Value> dargs;
          for (const auto& xs : in) {
            std::vector<minipy::Value> items;
            for (auto x : xs) items.push_back(minipy::Value::integer(x));
            args.push_back(minipy::Value::list(items));
            dargs.push_back(dsl::Value::int_list(xs));
          }
          const auto r = minipy::interpret(prog.ast, args);
          const auto e = dsl::eval_dsl(ast, dargs);
          ++pairs;
          if (!e.ok()) ++errors;
          if (r.ok() != e.ok() || (r.ok() && minipy::repr(r.output) != e.output)) ++mismatches;
        }
      }
    }
  }
  const double s = seconds_since(t0);
  return {pairs >= 1000 && mismatches == 0 && s < kOracleSeconds,
          std::to_string(pairs) + " pairs (" + std::to_string(errors) + " raising), " +
              std::to_string(mismatches) + " mismatches, " + fmt("%.1fs", s)};
}

Outcome constraint_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  long programs = 0, violations = 0;
  for (const auto& sig : kSignatures) {
    for (int depth : {4, 5}) {
      grammar::SamplerConfig sc;
      sc.program_type = dsl::parse_type(sig);
      sc.max_depth = depth;
      const auto cfg = grammar::compile(dsl::list_dsl(), sc.constraints, sc.program_type, depth);
      const int arity = static_cast<int>(dsl::arrow_args(sc.program_type).size());
      Rng rng(derive_seed(4, "constraints/" + sig + "/" + std::to_string(depth)));
      for (int k = 0; k < 2500; ++k) {
        const auto s = grammar::sample_valid_program(cfg, sc, rng);
        ++programs;
        violations += static_cast<long>(dsl::check_constraints(s.ast, dsl::Phase::All, arity).size());
      }
    }
  }
  const double s = seconds_since(t0);
  return {programs >= 10000 && violations == 0 && s < kConstraintSeconds,
          std::to_string(programs) + " programs, " + std::to_string(violations) + " violations, " + fmt("%.1fs", s)};
}

Outcome dataset_shape() {
  const auto& a = corpus().problems;
  datasets::DslListConfig cfg;
  cfg.seed = 1;
  const bool deterministic = datasets::build_dsl_list(cfg) == a;
  std::map<std::string, std::set<std::string>> programs_by_cell;
  std::set<std::string> programs;
  std::map<std::string, int> inputs;
  for (const auto& p : a) {
    programs.insert(p.program_id);
    ++inputs[p.program_id];
    programs_by_cell[p.program_id.substr(0, p.program_id.find("-p"))].insert(p.program_id);
  }
  std::string hist;
  bool bins_ok = programs_by_cell.size() == 10;
  for (const auto& prefix : {"dsl1", "dsl2"}) {
    hist += std::string(hist.empty() ? "" : " ") + prefix + "=[";
    for (int b = 0; b < 5; ++b) {
      const auto n = programs_by_cell[std::string(prefix) + "-b" + std::to_string(b)].size();
      bins_ok = bins_ok && n == 10;
      hist += (b ? "," : "") + std::to_string(n);
    }
    hist += "]";
  }
  bool three = true;
  for (const auto& [_, n] : inputs) three = three && n == 3;
  return {programs.size() == 100 && a.size() == 300 && three && bins_ok && deterministic,
          std::to_string(programs.size()) + " programs x 3 inputs, " + hist +
              (deterministic ? ", deterministic" : ", NOT deterministic")};
}

Outcome mutant_validity() {
  const auto& m = corpus().mutation;
  BuiltinExecutor ex;
  long span = 0, runs = 0, differs = 0;
  for (std::size_t i = 0; i < m.mutated.size(); ++i) {
    const auto& orig = m.kept[i];
    const auto& mut = m.mutated[i];
    span += mutate::single_span_difference(orig.source, mut.source);
    const auto r = ex.run({mut.source, mut.function_name, mut.input, false});
    runs += r.ok();
    const auto o = ex.run({orig.source, orig.function_name, orig.input, false});
    differs += r.ok() && o.ok() && !mutate::same_output(r.output_repr, o.output_repr) && r.output_repr == mut.output;
  }
  const long n = static_cast<long>(m.mutated.size());
  return {n > 0 && m.kept.size() == m.mutated.size() && span == n && runs == n && differs == n,
          std::to_string(n) + " mutants of " + std::to_string(corpus().problems.size()) + " problems (" +
              std::to_string(m.dropped.size()) + " dropped); single span " + std::to_string(span) + ", runs " +
              std::to_string(runs) + ", output differs " + std::to_string(differs)};
}

Outcome kind_coverage() {
  int found = 0;
  const std::vector<std::pair<std::string, mutate::Kind>> kinds = {{"arithmetic", mutate::Kind::Arithmetic},
                                                                   {"relational", mutate::Kind::Relational},
                                                                   {"logical", mutate::Kind::Logical},
                                                                   {"keyword", mutate::Kind::Keyword},
                                                                   {"numeric_literal", mutate::Kind::NumericLiteral}};
  std::string missing;
  for (const auto& [name, kind] : kinds) {
    const auto original = slurp("golden/mutation_kinds/" + name + ".py");
    const auto expected = slurp("golden/mutation_kinds/" + name + ".mutant.py");
    bool hit = false;
    for (const auto& m : mutate::enumerate_mutants(original)) hit = hit || (m.site.kind == kind && m.source == expected);
    found += hit;
    if (!hit) missing += " " + name;
  }
  return {found == 5, std::to_string(found) + "/5 kinds" + (missing.empty() ? "" : ", missing:" + missing)};
}

mutate::Survivor survivor(int line, std::size_t offset, std::set<int> covered) {
  mutate::Survivor s;
  s.mutant.source = "m" + std::to_string(line);
  s.mutant.site.line = line;
  s.mutant.site.offset = offset;
  s.response.status = ExecStatus::Ok;
  s.response.covered_lines = std::move(covered);
  return s;
}

Outcome coverage_selection() {
  const std::set<int> orig{1, 2, 3};
  const std::vector<mutate::Survivor> three = {survivor(2, 10, {1, 2}), survivor(3, 20, {1, 2, 3}),
                                               survivor(1, 5, {1})};
  const double j0 = mutate::jaccard(orig, three[0].response.covered_lines);
  const double j1 = mutate::jaccard(orig, three[1].response.covered_lines);
  const double j2 = mutate::jaccard(orig, three[2].response.covered_lines);
  const bool jaccard_ok = j1 == 1.0 && std::abs(j0 - 2.0 / 3.0) < 1e-12 && std::abs(j2 - 1.0 / 3.0) < 1e-12;
  Rng rng(1);
  const bool best = mutate::select_mutant(orig, three, rng) == 1;

  const std::set<int> tie_orig{1, 2, 3, 4};
  const std::vector<mutate::Survivor> tied = {survivor(2, 10, {1, 2, 3}), survivor(4, 30, {1}),
                                              survivor(3, 20, {1, 2, 4})};
  int first = 0, second = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng r(seed);
    const auto i = mutate::select_mutant(tie_orig, tied, r);
    first += i == 0;
    second += i == 2;
  }
  const bool tie_ok = first >= kTieLo && first <= kTieHi && second >= kTieLo && second <= kTieHi;
  return {jaccard_ok && best && tie_ok, std::string("jaccard 1.0/0.667/0.333 ") + (best ? "picks 1.0" : "WRONG pick") +
                                            ", tie split " + std::to_string(first) + "/" + std::to_string(second)};
}

std::string head(const dsl::Node& n) {
  if (n.kind == dsl::NodeKind::Literal) return "literal";
  if (n.kind == dsl::NodeKind::Param) return "param";
  return std::string(dsl::info(n.prim).name);
}

Outcome sampling_distribution() {
  const auto cfg = grammar::compile(dsl::list_dsl(), {}, dsl::parse_type("L(int) -> L(int)"), 4);
  std::map<std::string, double> weight;
  double total = 0;
  for (const auto& p : cfg.productions[static_cast<std::size_t>(cfg.start)]) {
    std::string h = p.kind == dsl::NodeKind::Literal ? "literal"
                    : p.kind == dsl::NodeKind::Param ? "param"
                                                     : std::string(dsl::info(p.prim).name);
    weight[h] += p.weight;
    total += p.weight;
  }
  const int draws = 100000;
  std::map<std::string, double> seen;
  Rng rng(derive_seed(7, "acceptance/chi-square"));
  for (int i = 0; i < draws; ++i) seen[head(grammar::sample(cfg, rng))] += 1;
  double stat = 0;
  for (const auto& [k, w] : weight) {
    const double e = draws * w / total;
    stat += (seen[k] - e) * (seen[k] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(weight.size() - 1));
  const double p = boost::math::cdf(boost::math::complement(dist, stat));
  // each production carries its primitive's weight; a head may have several productions
  bool ratios = weight.count("if") && weight.count("map") && weight.count("extend");
  for (const auto& p : cfg.productions[static_cast<std::size_t>(cfg.start)])
    if (p.kind == dsl::NodeKind::Prim)
      ratios = ratios && std::abs(p.weight - dsl::info(p.prim).default_weight) < 1e-12;
  return {p > kChiSquareAlpha && ratios, std::to_string(weight.size()) + " productions, if:map:extend:tail = " +
                                             fmt("%.0f:", seen["if"]) + fmt("%.0f:", seen["map"]) +
                                             fmt("%.0f:", seen["extend"]) + fmt("%.0f", seen["tail"]) +
                                             fmt(", chi-square p = %.4f", p)};
}

std::vector<harness::PredictionRecord> predict_with(const std::string& spec) {
  const auto& m = corpus().mutation;
  auto cfg = llm::profile("traditional");
  cfg.parallelism = 4;
  llm::Client client(llm::make_model(spec, cfg, m.kept, m.mutated), cfg);
  harness::RunOptions opt;
  opt.n = kSamples;
  return harness::run_prediction(m.kept, m.mutated, client, opt);
}

std::vector<harness::ChoiceRecord> choose_with(const std::string& spec) {
  const auto& m = corpus().mutation;
  auto cfg = llm::profile("traditional");
  cfg.parallelism = 4;
  llm::Client client(llm::make_model(spec, cfg, m.kept, m.mutated), cfg);
  return harness::run_choice(m.kept, m.mutated, client, {});
}

std::string pct(const metrics::Rate& r) {
  auto p = r.percent();
  return p ? fmt("%.1f", *p) : "-";
}

std::vector<harness::PredictionRecord> given_records;

Outcome mock_prediction() {
  const auto t0 = std::chrono::steady_clock::now();
  given_records = predict_with("mock:ground-truth-given");
  const auto g = metrics::prediction_metrics(given_records);
  const auto o = metrics::prediction_metrics(predict_with("mock:ground-truth-original"));
  const double s = seconds_since(t0);
  auto is = [](const metrics::Rate& r, double v) { return r.percent() && *r.percent() == v; };
  const bool ok = is(g.oc, 100) && is(g.mc, 100) && is(g.orr, 0) && is(g.mr, 0) && is(o.oc, 100) && is(o.mc, 0) &&
                  is(o.mr, 100) && s < kEndToEndSeconds;
  return {ok, "given OC/MC/OR/MR = " + pct(g.oc) + "/" + pct(g.mc) + "/" + pct(g.orr) + "/" + pct(g.mr) +
                  "; original OC/MC/MR = " + pct(o.oc) + "/" + pct(o.mc) + "/" + pct(o.mr) + " over " +
                  std::to_string(g.problems) + " pairs, " + fmt("%.1fs", s)};
}

Outcome mock_choice() {
  const auto a = metrics::choice_metrics(choose_with("mock:ground-truth-given@A"));
  const auto b = metrics::choice_metrics(choose_with("mock:ground-truth-given@B"));
  auto is = [](const metrics::Rate& r, double v) { return r.percent() && *r.percent() == v; };
  const bool ok = is(a.pref, 50) && is(b.pref, 50) && is(a.oc, 100) && is(a.mc, 100) && is(b.oc, 100) &&
                  is(b.mc, 100) && a.unparsed_choice == 0;
  return {ok, "always-A Pref = " + pct(a.pref) + ", always-B Pref = " + pct(b.pref) +
                  ", chosen-variant correctness " + pct(a.oc) + "/" + pct(a.mc) + " over " +
                  std::to_string(a.runs) + " runs"};
}

Outcome metric_partition() {
  if (given_records.empty()) given_records = predict_with("mock:ground-truth-given");
  std::map<std::pair<std::string, std::string>, metrics::Partition> groups;
  for (const auto& r : given_records) {
    auto& p = groups[{r.problem_id, r.variant}];
    switch (r.judgment) {
      case harness::Judgment::Correct: ++p.correct; break;
      case harness::Judgment::Reverted: ++p.reverted; break;
      case harness::Judgment::Other: ++p.other; break;
      case harness::Judgment::Unparsed: ++p.unparsed; break;
    }
  }
  long bad = 0;
  for (const auto& [_, p] : groups) bad += p.total() != kSamples;

  // The DSL-List has no Boolean outputs; mark some problems Boolean to check the denominators.
  auto records = given_records;
  std::set<std::string> boolean;
  for (const auto& r : records)
    if (boolean.size() < 17 || boolean.count(r.problem_id)) boolean.insert(r.problem_id);
  for (auto& r : records) r.bool_output = boolean.count(r.problem_id) > 0;
  const auto m = metrics::prediction_metrics(records);
  const long pairs = m.problems;
  const bool den_ok = m.oc.den == pairs && m.mc.den == pairs && m.orr.den == pairs - 17 && m.mr.den == pairs - 17 &&
                      m.boolean_excluded == 17;
  long natural_bool = 0;
  for (const auto& p : corpus().mutation.kept) natural_bool += p.bool_output();
  return {bad == 0 && !groups.empty() && den_ok,
          std::to_string(groups.size()) + " problem-variants, " + std::to_string(bad) +
              " not summing to 5; reversion denominator " + std::to_string(m.orr.den) + " of " +
              std::to_string(pairs) + " with 17 Boolean (" + std::to_string(natural_bool) + " in corpus)"};
}

Outcome prompt_fidelity() {
  Problem orig, mut;
  orig.source =
      "def f(a1):\n    v1 = []\n    for i in range(len(a1)):\n        if a1[i] > 2:\n            v1.append(a1[i])\n    return v1\n";
  mut.source =
      "def f(a1):\n    v1 = []\n    for i in range(len(a1)):\n        if a1[i] >= 2:\n            v1.append(a1[i])\n    return v1\n";
  orig.input = mut.input = "[1, 2, 3]";
  using harness::Order;
  using harness::PromptMode;
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"prediction_zero_shot", harness::prediction_prompt(orig, PromptMode::ZeroShot)},
      {"prediction_one_shot", harness::prediction_prompt(orig, PromptMode::OneShot)},
      {"choice_zero_shot_original_first", harness::choice_prompt(orig, mut, Order::OriginalFirst, PromptMode::ZeroShot)},
      {"choice_zero_shot_mutated_first", harness::choice_prompt(orig, mut, Order::MutatedFirst, PromptMode::ZeroShot)},
      {"choice_one_shot_original_first", harness::choice_prompt(orig, mut, Order::OriginalFirst, PromptMode::OneShot)},
      {"choice_one_shot_mutated_first", harness::choice_prompt(orig, mut, Order::MutatedFirst, PromptMode::OneShot)},
  };
  int match = 0;
  std::string bad;
  for (const auto& [name, text] : cases) {
    const bool same = slurp("golden/" + name + ".txt") == text;
    match += same;
    if (!same) bad += " " + name;
  }
  const bool examples = cases[1].second.find("\"bhihia\"") != std::string::npos &&
                        cases[4].second.find("'Hello'") != std::string::npos;
  return {match == 6 && examples, std::to_string(match) + "/6 byte-identical" + (bad.empty() ? "" : ", differ:" + bad)};
}

Outcome differential() {
  const auto cases = execbench::testing::load_differential("fixtures/differential_programs.txt");
  BuiltinExecutor builtin;
  ExternalExecutor reference({"python3 fixtures/py_executor.py", 1});
  long runs = 0, same = 0;
  std::string first_bad;
  for (const auto& c : cases) {
    for (const auto& input : c.inputs) {
      const ExecRequest req{c.source, "f", input, false};
      const auto a = builtin.run(req);
      const auto b = reference.run(req);
      ++runs;
      const bool eq = b.status != ExecStatus::Protocol && a.status == b.status && a.output_repr == b.output_repr &&
                      a.error_kind == b.error_kind;
      same += eq;
      if (!eq && first_bad.empty()) first_bad = c.name;
    }
  }
  return {cases.size() >= 50 && same == runs,
          std::to_string(cases.size()) + " programs, " + std::to_string(same) + "/" + std::to_string(runs) +
              " runs identical" + (first_bad.empty() ? "" : ", first mismatch " + first_bad)};
}

std::optional<Outcome> live_smoke() {
  const char* endpoint = std::getenv("EXECBENCH_LIVE_ENDPOINT");
  const char* model = std::getenv("EXECBENCH_LIVE_MODEL");
  if (!endpoint || !*endpoint || !model || !*model) return std::nullopt;
  const auto& m = corpus().mutation;
  const char* profile_name = std::getenv("EXECBENCH_LIVE_PROFILE");
  auto cfg = llm::profile(profile_name && *profile_name ? profile_name : "traditional");
  cfg.endpoint = endpoint;
  const auto transcript = (std::filesystem::temp_directory_path() / "execbench_live_transcript.jsonl").string();
  std::filesystem::remove(transcript);
  llm::ClientOptions opt;
  opt.transcript_path = transcript;
  llm::Client client(llm::make_model(model, cfg), cfg, opt);
  harness::RunOptions run;
  run.n = 1;
  run.limit = 10;
  run.mode = harness::default_prompt_mode(cfg.profile);
  const auto records = harness::run_prediction(m.kept, m.mutated, client, run);
  const auto report = metrics::report_table(metrics::build_report(records, {}));
  long requests = 0, logged = 0, answered = 0;
  for (const auto& e : read_jsonl(transcript)) {
    requests += e["event"] == "request";
    logged += e["event"] == "response" || e["event"] == "error";
    answered += e["event"] == "response";
  }
  const bool ok = records.size() == 20 && requests == 20 && logged == 20 && answered == 20 &&
                  report.find(model) != std::string::npos;
  return Outcome{ok, std::to_string(records.size()) + " records, " + std::to_string(logged) + "/" +
                         std::to_string(requests) + " requests logged, " + std::to_string(answered) + " answered"};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<std::optional<Outcome>()> check;
  };
  auto always = [](Outcome (*f)()) { return [f]() -> std::optional<Outcome> { return f(); }; };
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", always(oracle_equivalence)},
      {2, "constraint soundness", always(constraint_soundness)},
      {3, "dataset shape", always(dataset_shape)},
      {4, "mutant validity", always(mutant_validity)},
      {5, "mutation kind coverage", always(kind_coverage)},
      {6, "coverage-similarity selection", always(coverage_selection)},
      {7, "sampling distribution", always(sampling_distribution)},
      {8, "mock end-to-end prediction", always(mock_prediction)},
      {9, "mock end-to-end choice", always(mock_choice)},
      {10, "metric partition", always(metric_partition)},
      {11, "prompt fidelity", always(prompt_fidelity)},
      {12, "differential interpreter", always(differential)},
      {13, "live smoke test", live_smoke},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::optional<Outcome> out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = Outcome{false, std::string("exception: ") + e.what()};
    }
    if (!out) {
      std::printf("criterion %2d %-30s SKIP (set EXECBENCH_LIVE_ENDPOINT and EXECBENCH_LIVE_MODEL)\n", c.number,
                  c.name);
    } else {
      failed += !out->pass;
      std::printf("criterion %2d %-30s %s (%s)\n", c.number, c.name, out->pass ? "PASS" : "FAIL",
                  out->detail.c_str());
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
