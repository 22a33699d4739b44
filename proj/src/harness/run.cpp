#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "execbench/harness.hpp"

namespace execbench::harness {

using nlohmann::json;

namespace {

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

std::optional<std::string> repr_of(const std::optional<pyliteral::Literal>& v) {
  if (!v) return std::nullopt;
  return pyliteral::repr(*v);
}

struct Pair {
  const Problem* original;
  const Problem* mutated;
};

std::vector<Pair> pair_up(const std::vector<Problem>& originals, const std::vector<Problem>& mutated,
                          std::size_t limit) {
  std::map<std::string, const Problem*> by_id;
  for (const auto& m : mutated) by_id[m.id] = &m;
  std::vector<Pair> out;
  for (const auto& o : originals) {
    auto it = by_id.find(o.id);
    if (it == by_id.end()) continue;
    out.push_back({&o, it->second});
    if (limit && out.size() == limit) break;
  }
  return out;
}

// Runs tasks on `workers` threads.
void run_pool(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i; (i = next++) < count;) task(i);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (n == 1) {
    loop();
    return;
  }
  std::vector<std::thread> threads;
  for (int i = 0; i < n; ++i) threads.emplace_back(loop);
  for (auto& t : threads) t.join();
}

std::string prediction_key(const std::string& id, const std::string& variant, int sample) {
  return id + "|" + variant + "|" + std::to_string(sample);
}

std::string choice_key(const std::string& id, int run) { return id + "|" + std::to_string(run); }

}  // namespace

json PredictionRecord::to_json() const {
  return {{"problem_id", problem_id},
          {"variant", variant},
          {"sample", sample},
          {"model", model},
          {"dataset", dataset},
          {"loc", loc},
          {"bool_output", bool_output},
          {"response", response},
          {"extracted", optional_string(extracted)},
          {"judgment", std::string(judgment_name(judgment))},
          {"unanswered", unanswered}};
}

PredictionRecord PredictionRecord::from_json(const json& j) {
  PredictionRecord r;
  r.problem_id = j.at("problem_id").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.sample = j.at("sample").get<int>();
  r.model = j.value("model", "");
  r.dataset = j.value("dataset", "");
  r.loc = j.value("loc", 0);
  r.bool_output = j.value("bool_output", false);
  r.response = j.value("response", "");
  r.extracted = read_optional_string(j, "extracted");
  r.judgment = parse_judgment(j.at("judgment").get<std::string>());
  r.unanswered = j.value("unanswered", false);
  return r;
}

json ChoiceRecord::to_json() const {
  return {{"problem_id", problem_id},
          {"run", run},
          {"order", order},
          {"chosen", chosen},
          {"model", model},
          {"dataset", dataset},
          {"loc", loc},
          {"bool_output", bool_output},
          {"response", response},
          {"extracted", optional_string(extracted)},
          {"judgment", std::string(judgment_name(judgment))},
          {"unanswered", unanswered}};
}

ChoiceRecord ChoiceRecord::from_json(const json& j) {
  ChoiceRecord r;
  r.problem_id = j.at("problem_id").get<std::string>();
  r.run = j.at("run").get<int>();
  r.order = j.at("order").get<std::string>();
  r.chosen = j.at("chosen").get<std::string>();
  r.model = j.value("model", "");
  r.dataset = j.value("dataset", "");
  r.loc = j.value("loc", 0);
  r.bool_output = j.value("bool_output", false);
  r.response = j.value("response", "");
  r.extracted = read_optional_string(j, "extracted");
  r.judgment = parse_judgment(j.at("judgment").get<std::string>());
  r.unanswered = j.value("unanswered", false);
  return r;
}

std::vector<PredictionRecord> load_prediction_records(const std::string& path) {
  std::vector<PredictionRecord> out;
  if (!std::filesystem::exists(path)) return out;
  for (const auto& j : read_jsonl(path)) out.push_back(PredictionRecord::from_json(j));
  return out;
}

std::vector<ChoiceRecord> load_choice_records(const std::string& path) {
  std::vector<ChoiceRecord> out;
  if (!std::filesystem::exists(path)) return out;
  for (const auto& j : read_jsonl(path)) out.push_back(ChoiceRecord::from_json(j));
  return out;
}

std::vector<PredictionRecord> run_prediction(const std::vector<Problem>& originals,
                                             const std::vector<Problem>& mutated,
                                             llm::Client& client, const RunOptions& options) {
  if (options.n < 1) throw std::invalid_argument("n must be at least 1");
  const auto pairs = pair_up(originals, mutated, options.limit);

  std::map<std::string, PredictionRecord> done;
  if (!options.records_path.empty())
    for (auto& r : load_prediction_records(options.records_path))
      done.emplace(prediction_key(r.problem_id, r.variant, r.sample), std::move(r));

  struct Task {
    const Problem* shown;
    const Problem* other;
    std::string variant;
    int sample;
  };
  std::vector<Task> tasks;
  for (const auto& p : pairs)
    for (int v = 0; v < 2; ++v) {
      const Problem* shown = v == 0 ? p.original : p.mutated;
      const Problem* other = v == 0 ? p.mutated : p.original;
      const std::string variant = v == 0 ? "original" : "mutated";
      for (int s = 0; s < options.n; ++s)
        if (!done.count(prediction_key(shown->id, variant, s))) tasks.push_back({shown, other, variant, s});
    }

  std::mutex mu;
  run_pool(tasks.size(), client.config().parallelism, [&](std::size_t i) {
    const Task& t = tasks[i];
    const std::vector<llm::Message> messages{{"user", prediction_prompt(*t.shown, options.mode)}};
    auto response = client.complete_one(messages, t.sample, "pred:" + t.shown->id + ":" + t.variant);
    PredictionRecord r;
    r.problem_id = t.shown->id;
    r.variant = t.variant;
    r.sample = t.sample;
    r.model = client.model_name();
    r.dataset = t.shown->dataset;
    r.loc = t.shown->loc;
    r.bool_output = t.shown->bool_output() || t.other->bool_output();
    if (response.ok) {
      r.response = response.text;
      auto value = extract_prediction(response.text);
      r.extracted = repr_of(value);
      r.judgment = judge(value, t.shown->output, t.other->output);
    } else {
      r.response = response.error;
      r.unanswered = true;
    }
    std::lock_guard lock(mu);
    if (!options.records_path.empty()) append_jsonl(options.records_path, r.to_json());
    done.emplace(prediction_key(r.problem_id, r.variant, r.sample), std::move(r));
  });

  std::vector<PredictionRecord> out;
  for (const auto& p : pairs)
    for (const char* variant : {"original", "mutated"})
      for (int s = 0; s < options.n; ++s) {
        auto it = done.find(prediction_key(p.original->id, variant, s));
        if (it != done.end()) out.push_back(it->second);
      }
  return out;
}

std::vector<ChoiceRecord> run_choice(const std::vector<Problem>& originals,
                                     const std::vector<Problem>& mutated, llm::Client& client,
                                     const RunOptions& options) {
  const auto pairs = pair_up(originals, mutated, options.limit);

  std::map<std::string, ChoiceRecord> done;
  if (!options.records_path.empty())
    for (auto& r : load_choice_records(options.records_path))
      done.emplace(choice_key(r.problem_id, r.run), std::move(r));

  struct Task {
    Pair pair;
    int run;
  };
  std::vector<Task> tasks;
  for (const auto& p : pairs)
    for (int run = 1; run <= 2; ++run)
      if (!done.count(choice_key(p.original->id, run))) tasks.push_back({p, run});

  std::mutex mu;
  run_pool(tasks.size(), client.config().parallelism, [&](std::size_t i) {
    const Task& t = tasks[i];
    const Problem& orig = *t.pair.original;
    const Problem& mut = *t.pair.mutated;
    const Order order = t.run == 1 ? Order::OriginalFirst : Order::MutatedFirst;
    const std::vector<llm::Message> messages{{"user", choice_prompt(orig, mut, order, options.mode)}};
    auto response = client.complete_one(messages, t.run - 1, "choice:" + orig.id);
    ChoiceRecord r;
    r.problem_id = orig.id;
    r.run = t.run;
    r.order = order == Order::OriginalFirst ? "A=original" : "A=mutated";
    r.chosen = "unparsed";
    r.model = client.model_name();
    r.dataset = orig.dataset;
    r.loc = orig.loc;
    r.bool_output = orig.bool_output() || mut.bool_output();
    if (response.ok) {
      r.response = response.text;
      auto answer = extract_choice(response.text);
      r.extracted = repr_of(answer.value);
      if (answer.letter) {
        const bool picked_original = (*answer.letter == 'A') == (order == Order::OriginalFirst);
        r.chosen = picked_original ? "original" : "mutated";
        const Problem& own = picked_original ? orig : mut;
        const Problem& other = picked_original ? mut : orig;
        r.judgment = judge(answer.value, own.output, other.output);
      }
    } else {
      r.response = response.error;
      r.unanswered = true;
    }
    std::lock_guard lock(mu);
    if (!options.records_path.empty()) append_jsonl(options.records_path, r.to_json());
    done.emplace(choice_key(r.problem_id, r.run), std::move(r));
  });

  std::vector<ChoiceRecord> out;
  for (const auto& p : pairs)
    for (int run = 1; run <= 2; ++run) {
      auto it = done.find(choice_key(p.original->id, run));
      if (it != done.end()) out.push_back(it->second);
    }
  return out;
}

}  // namespace execbench::harness
