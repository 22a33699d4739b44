// execbench command-line entry point.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "execbench/datasets.hpp"
#include "execbench/executor.hpp"
#include "execbench/grammar.hpp"
#include "execbench/harness.hpp"
#include "execbench/llm.hpp"
#include "execbench/metrics.hpp"
#include "execbench/mutate.hpp"
#include "execbench/rng.hpp"
#include "execbench/transpile.hpp"
#include "execbench/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace execbench;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string model_profile = "traditional";
  std::string endpoint;
  std::string executor_cmd;
  int executor_pool = 1;
  int n = 5;
  int parallelism = 4;
  int max_retries = 5;
  std::string prompt_mode;
  std::string fixed_functions = "data/fixed_functions.json";
  int retry_cap = 5;
  std::string api_key_env = "OPENAI_API_KEY";
  std::uint64_t max_steps = 1000;
};

// Flat key=value file; blank lines and lines starting with # ignored.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key=value");
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(Settings& s, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    try {
      if (key == "seed") s.seed = std::stoull(value);
      else if (key == "model_profile") s.model_profile = value;
      else if (key == "endpoint") s.endpoint = value;
      else if (key == "executor_cmd") s.executor_cmd = value;
      else if (key == "executor_pool") s.executor_pool = std::stoi(value);
      else if (key == "n") s.n = std::stoi(value);
      else if (key == "parallelism") s.parallelism = std::stoi(value);
      else if (key == "max_retries") s.max_retries = std::stoi(value);
      else if (key == "prompt_mode") s.prompt_mode = value;
      else if (key == "fixed_functions") s.fixed_functions = value;
      else if (key == "retry_cap") s.retry_cap = std::stoi(value);
      else if (key == "api_key_env") s.api_key_env = value;
      else if (key == "max_steps") s.max_steps = std::stoull(value);
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad value for config key '" + key + "': " + value);
    }
  }
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return llm::sha256_hex(buf.str());
}

json hashes(const std::vector<std::string>& paths) {
  json j = json::object();
  for (const auto& p : paths)
    if (fs::is_regular_file(p)) j[p] = file_sha256(p);
  return j;
}

void write_manifest(const std::string& path, const std::string& command, const Settings& s,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    json extra = json::object()) {
  json m = {{"command", command},
            {"config_path", s.config_path},
            {"seed", s.seed},
            {"tool_version", kVersion},
            {"inputs", hashes(inputs)},
            {"outputs", hashes(outputs)}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_text_atomic(path, m.dump(2) + "\n");
}

std::string manifest_for(const std::string& out) {
  if (fs::is_directory(out)) return (fs::path(out) / "manifest.json").string();
  return out + ".manifest.json";
}

std::unique_ptr<Executor> make_executor(const Settings& s) {
  if (s.executor_cmd.empty()) return std::make_unique<BuiltinExecutor>();
  return std::make_unique<ExternalExecutor>(ExternalOptions{s.executor_cmd, s.executor_pool});
}

llm::ModelConfig model_config(const Settings& s) {
  llm::ModelConfig c;
  try {
    c = llm::profile(s.model_profile);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!s.endpoint.empty()) c.endpoint = s.endpoint;
  c.n_samples = s.n;
  c.parallelism = s.parallelism;
  c.max_retries = s.max_retries;
  c.api_key_env = s.api_key_env;
  return c;
}

harness::PromptMode prompt_mode(const Settings& s) {
  if (s.prompt_mode.empty()) return harness::default_prompt_mode(s.model_profile);
  try {
    return harness::parse_prompt_mode(s.prompt_mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

llm::ClientOptions client_options(const std::string& transcript) {
  llm::ClientOptions o;
  o.transcript_path = transcript;
  return o;
}

std::string pair_file(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

std::string slug(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  return s;
}

// One series per (dataset, model).
std::vector<std::string> write_series(const std::string& dir, const std::vector<harness::PredictionRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<harness::PredictionRecord>> groups;
  for (const auto& r : records) groups[{r.dataset, r.model}].push_back(r);
  std::vector<std::string> files;
  for (const auto& [key, recs] : groups) {
    const auto rows = metrics::loc_series(recs, metrics::default_bins());
    const std::string stem = pair_file(dir, ("loc_series." + slug(key.first) + "." + slug(key.second)).c_str());
    write_text_atomic(stem + ".csv", metrics::series_csv(rows));
    write_text_atomic(stem + ".dat", metrics::series_dat(rows));
    files.push_back(stem + ".csv");
    files.push_back(stem + ".dat");
  }
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"execbench: execution-prediction benchmark pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Settings s;
  std::vector<std::string> overrides;
  std::string model_profile, executor_cmd, prompt;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  app.add_option("--config", s.config_path, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "global seed");
  app.add_option("--model-profile", model_profile, "traditional | reasoning | effort-based");
  app.add_option("--executor-cmd", executor_cmd, "external executor command line");
  app.add_option("--set", overrides, "config override key=value (repeatable)");
  app.fallthrough();

  // sample
  auto* sample = app.add_subcommand("sample", "Sample valid DSL programs with inputs and outputs");
  std::string type = "L(int) -> L(int)";
  int depth = 4, count = 1;
  std::string out;
  sample->add_option("--type", type, "program type");
  sample->add_option("--depth", depth, "maximum depth")->check(CLI::Range(2, 8));
  sample->add_option("--count", count, "programs to sample")->check(CLI::PositiveNumber);
  sample->add_option("--out", out, "JSONL output (stdout when omitted)");

  // transpile
  auto* transpile_cmd = app.add_subcommand("transpile", "Translate a DSL program to Python");
  std::string program;
  int params = 0;
  transpile_cmd->add_option("program", program, "s-expression, e.g. \"(tail a1)\"")->required();
  transpile_cmd->add_option("--params", params, "parameter count");

  // build-dsl-list
  auto* dsl_list = app.add_subcommand("build-dsl-list", "Build the DSL-List problem set");
  dsl_list->add_option("--out", out, "JSONL output")->required();

  // build-llm-list
  auto* llm_list = app.add_subcommand("build-llm-list", "Build the LLM-List problem set");
  std::string model_spec, transcript;
  llm_list->add_option("--model", model_spec, "model id or mock spec")->required();
  llm_list->add_option("--out", out, "JSONL output")->required();
  llm_list->add_option("--transcript", transcript, "request/response log");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Ingest external problems");
  std::string in;
  std::string rejections_path;
  ingest->add_option("--in", in, "JSONL of {source, function_name, input}")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", out, "JSONL output")->required();
  ingest->add_option("--rejections", rejections_path, "JSONL of rejected records");

  // mutate
  auto* mutate_cmd = app.add_subcommand("mutate", "Pair problems with coverage-similar mutants");
  mutate_cmd->add_option("--in", in, "problem JSONL")->required()->check(CLI::ExistingFile);
  mutate_cmd->add_option("--out", out, "output directory")->required();

  // run-pred / run-choice
  std::string pairs;
  std::size_t limit = 0;
  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--pairs", pairs, "directory written by mutate")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--model", model_spec, "model id or mock spec")->required();
    cmd->add_option("--out", out, "record JSONL (appended; existing records are kept)")->required();
    cmd->add_option("--prompt-mode", prompt, "zero-shot | one-shot");
    cmd->add_option("--limit", limit, "first N pairs only");
    cmd->add_option("--transcript", transcript, "request/response log");
  };
  auto* run_pred = app.add_subcommand("run-pred", "Execution-prediction experiment");
  add_run_options(run_pred);
  run_pred->add_option("--n", n, "samples per problem variant")->check(CLI::PositiveNumber);
  auto* run_choice = app.add_subcommand("run-choice", "Execution-choice experiment");
  add_run_options(run_choice);

  // report
  auto* report = app.add_subcommand("report", "Aggregate records into metrics");
  std::vector<std::string> pred_paths, choice_paths;
  report->add_option("--pred", pred_paths, "prediction record JSONL")->check(CLI::ExistingFile);
  report->add_option("--choice", choice_paths, "choice record JSONL")->check(CLI::ExistingFile);
  report->add_option("--out", out, "output directory");

  // check-prompts
  auto* check_prompts = app.add_subcommand("check-prompts", "Compare rendered prompt templates with goldens");
  std::string goldens = "tests/golden";
  check_prompts->add_option("--goldens", goldens, "golden directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!s.config_path.empty()) apply_config(s, read_config(s.config_path));
    std::map<std::string, std::string> kv;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
      kv[o.substr(0, eq)] = o.substr(eq + 1);
    }
    apply_config(s, kv);
    if (seed) s.seed = *seed;
    if (!model_profile.empty()) s.model_profile = model_profile;
    if (!executor_cmd.empty()) s.executor_cmd = executor_cmd;
    if (!prompt.empty()) s.prompt_mode = prompt;
    if (n) s.n = *n;

    if (*sample) {
      grammar::SamplerConfig sc;
      try {
        sc.program_type = dsl::parse_type(type);
      } catch (const std::exception& e) {
        throw UsageError(std::string("bad --type: ") + e.what());
      }
      sc.max_depth = depth;
      const auto cfg = grammar::compile(dsl::list_dsl(), sc.constraints, sc.program_type, depth);
      Rng rng(derive_seed(s.seed, "sample"));
      std::string text;
      for (int i = 0; i < count; ++i) {
        auto p = grammar::sample_valid_program(cfg, sc, rng);
        json inputs = json::array();
        for (const auto& x : p.inputs) inputs.push_back(grammar::input_text(x));
        text += json{{"dsl", dsl::to_text(p.ast)},
                     {"inputs", inputs},
                     {"outputs", p.outputs},
                     {"attempts", p.attempts}}
                    .dump() +
                "\n";
      }
      if (out.empty()) {
        std::cout << text;
      } else {
        write_text_atomic(out, text);
        write_manifest(manifest_for(out), "sample", s, {}, {out});
      }
    } else if (*transpile_cmd) {
      dsl::Node ast;
      try {
        ast = dsl::parse_program(program);
      } catch (const dsl::ParseError& e) {
        throw UsageError(e.what());
      }
      std::cout << transpile::translate(ast, "f", params).source;
    } else if (*dsl_list) {
      datasets::DslListConfig config;
      config.seed = s.seed;
      save_problems(out, datasets::build_dsl_list(config));
      write_manifest(manifest_for(out), "build-dsl-list", s, {}, {out});
    } else if (*llm_list) {
      if (s.executor_cmd.empty()) throw UsageError("build-llm-list needs --executor-cmd");
      auto executor = make_executor(s);
      auto config = model_config(s);
      llm::Client client(llm::make_model(model_spec, config), config, client_options(transcript));
      datasets::LlmListConfig lc;
      lc.fixed_functions_path = s.fixed_functions;
      lc.retry_cap = s.retry_cap;
      auto result = datasets::build_llm_list(client, *executor, lc);
      save_problems(out, result.problems);
      write_manifest(manifest_for(out), "build-llm-list", s, {s.fixed_functions}, {out, transcript},
                     {{"model", model_spec}, {"model_config_hash", config.hash()}});
      for (const auto& [header, reason] : result.failures) std::cerr << header << ": " << reason << "\n";
      std::cerr << result.problems.size() << " problems from " << result.functions.size() << " functions\n";
      if (!result.failures.empty()) return 1;
    } else if (*ingest) {
      if (s.executor_cmd.empty()) throw UsageError("ingest needs --executor-cmd");
      auto executor = make_executor(s);
      datasets::IngestConfig ic;
      ic.max_steps = s.max_steps;
      auto result = datasets::ingest_external(in, *executor, ic);
      save_problems(out, result.problems);
      std::string rej;
      for (const auto& r : result.rejections) rej += json{{"id", r.id}, {"reason", r.reason}}.dump() + "\n";
      if (rejections_path.empty()) rejections_path = out + ".rejections.jsonl";
      write_text_atomic(rejections_path, rej);
      write_manifest(manifest_for(out), "ingest", s, {in}, {out, rejections_path});
      std::cerr << result.problems.size() << " accepted, " << result.rejections.size() << " rejected\n";
    } else if (*mutate_cmd) {
      auto executor = make_executor(s);
      auto problems = load_problems(in);
      auto result = mutate::mutate_dataset(problems, *executor, s.seed);
      fs::create_directories(out);
      const auto original_path = pair_file(out, "original.jsonl");
      const auto mutated_path = pair_file(out, "mutated.jsonl");
      const auto dropped_path = pair_file(out, "dropped.jsonl");
      save_problems(original_path, result.kept);
      save_problems(mutated_path, result.mutated);
      std::string dropped;
      for (const auto& [id, reason] : result.dropped) dropped += json{{"id", id}, {"reason", reason}}.dump() + "\n";
      write_text_atomic(dropped_path, dropped);
      write_manifest(manifest_for(out), "mutate", s, {in}, {original_path, mutated_path, dropped_path},
                     {{"candidates", result.candidates}, {"survivors", result.survivors}});
      std::cerr << result.kept.size() << " pairs, " << result.dropped.size() << " dropped\n";
    } else if (*run_pred || *run_choice) {
      const auto original_path = pair_file(pairs, "original.jsonl");
      const auto mutated_path = pair_file(pairs, "mutated.jsonl");
      auto originals = load_problems(original_path);
      auto mutated = load_problems(mutated_path);
      auto config = model_config(s);
      llm::Client client(llm::make_model(model_spec, config, originals, mutated), config, client_options(transcript));
      harness::RunOptions ro;
      ro.n = s.n;
      ro.mode = prompt_mode(s);
      ro.records_path = out;
      ro.limit = limit;
      std::size_t records = 0;
      if (*run_pred)
        records = harness::run_prediction(originals, mutated, client, ro).size();
      else
        records = harness::run_choice(originals, mutated, client, ro).size();
      write_manifest(manifest_for(out), *run_pred ? "run-pred" : "run-choice", s, {original_path, mutated_path},
                     {out},
                     {{"model", model_spec},
                      {"model_config", config.to_json()},
                      {"model_config_hash", config.hash()},
                      {"prompt_mode", std::string(harness::prompt_mode_name(ro.mode))}});
      std::cerr << records << " records\n";
    } else if (*check_prompts) {
      Problem orig, mut;
      orig.source =
          "def f(a1):\n    v1 = []\n    for i in range(len(a1)):\n        if a1[i] > 2:\n            v1.append(a1[i])\n    return v1\n";
      mut.source = orig.source;
      mut.source.replace(mut.source.find("> 2"), 3, ">= 2");
      orig.input = mut.input = "[1, 2, 3]";
      using harness::Order;
      using harness::PromptMode;
      const std::vector<std::pair<std::string, std::string>> rendered = {
          {"prediction_zero_shot", harness::prediction_prompt(orig, PromptMode::ZeroShot)},
          {"prediction_one_shot", harness::prediction_prompt(orig, PromptMode::OneShot)},
          {"choice_zero_shot_original_first",
           harness::choice_prompt(orig, mut, Order::OriginalFirst, PromptMode::ZeroShot)},
          {"choice_zero_shot_mutated_first",
           harness::choice_prompt(orig, mut, Order::MutatedFirst, PromptMode::ZeroShot)},
          {"choice_one_shot_original_first",
           harness::choice_prompt(orig, mut, Order::OriginalFirst, PromptMode::OneShot)},
          {"choice_one_shot_mutated_first",
           harness::choice_prompt(orig, mut, Order::MutatedFirst, PromptMode::OneShot)},
      };
      int mismatches = 0;
      for (const auto& [name, text] : rendered) {
        std::ifstream g(fs::path(goldens) / (name + ".txt"), std::ios::binary);
        if (!g) throw UsageError("missing golden " + name + ".txt in " + goldens);
        const std::string golden((std::istreambuf_iterator<char>(g)), std::istreambuf_iterator<char>());
        const bool same = golden == text;
        mismatches += !same;
        std::cout << (same ? "ok       " : "MISMATCH ") << name << "\n";
      }
      if (mismatches) throw std::runtime_error(std::to_string(mismatches) + " prompt template(s) differ from goldens");
    } else if (*report) {
      if (pred_paths.empty() && choice_paths.empty()) throw UsageError("report needs --pred or --choice");
      std::vector<harness::PredictionRecord> pred;
      std::vector<harness::ChoiceRecord> choice;
      for (const auto& p : pred_paths)
        for (auto& r : harness::load_prediction_records(p)) pred.push_back(std::move(r));
      for (const auto& p : choice_paths)
        for (auto& r : harness::load_choice_records(p)) choice.push_back(std::move(r));
      const auto rows = metrics::build_report(pred, choice);
      const std::string table = metrics::report_table(rows);
      std::cout << table;
      if (!out.empty()) {
        fs::create_directories(out);
        write_text_atomic(pair_file(out, "report.txt"), table);
        write_text_atomic(pair_file(out, "report.csv"), metrics::report_csv(rows));
        std::vector<std::string> outputs{pair_file(out, "report.txt"), pair_file(out, "report.csv")};
        for (auto& f : write_series(out, pred)) outputs.push_back(std::move(f));
        std::vector<std::string> inputs = pred_paths;
        inputs.insert(inputs.end(), choice_paths.begin(), choice_paths.end());
        write_manifest(manifest_for(out), "report", s, inputs, outputs);
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
