#include <stdexcept>

#include "execbench/llm.hpp"

namespace execbench::llm {

using nlohmann::json;

namespace {

std::string strip_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

// Text between the last `open` and the following `close`.
std::optional<std::string> last_block(const std::string& text, const std::string& open,
                                      const std::string& close) {
  auto a = text.rfind(open);
  if (a == std::string::npos) return std::nullopt;
  a += open.size();
  auto b = text.find(close, a);
  if (b == std::string::npos) return std::nullopt;
  return text.substr(a, b - a);
}

// `name` and `args` of `assert name(args) == ??`.
std::optional<std::pair<std::string, std::string>> assertion_call(const std::string& line) {
  auto a = line.find("assert ");
  auto tail = line.rfind(") == ??");
  if (a == std::string::npos || tail == std::string::npos) return std::nullopt;
  a += 7;
  auto paren = line.find('(', a);
  if (paren == std::string::npos || paren > tail) return std::nullopt;
  return std::make_pair(line.substr(a, paren - a), line.substr(paren + 1, tail - paren - 1));
}

}  // namespace

ScriptedModel::ScriptedModel(const std::string& transcript_path) {
  for (const auto& e : read_jsonl(transcript_path))
    if (e.value("event", "") == "response") replies_[e.at("key").get<std::string>()] = e.at("text");
}

ModelResponse ScriptedModel::sample(const std::vector<Message>& messages, int sample_index) {
  auto it = replies_.find(request_key(messages, sample_index));
  if (it == replies_.end()) throw std::runtime_error("scripted model: request not in transcript");
  ModelResponse r;
  r.ok = true;
  r.text = it->second;
  r.finish_reason = "stop";
  return r;
}

GroundTruthModel::GroundTruthModel(Mode mode, const std::vector<Problem>& originals,
                                   const std::vector<Problem>& mutated, char choice_letter)
    : mode_(mode), letter_(choice_letter) {
  std::map<std::string, const Problem*> original_by_id;
  for (const auto& p : originals) original_by_id[p.id] = &p;
  for (const auto& p : originals)
    by_source_input_[{strip_newlines(p.source), p.input}] = {p.function_name, p.output, p.output};
  for (const auto& p : mutated) {
    auto it = original_by_id.find(p.id);
    const std::string orig = it == original_by_id.end() ? p.output : it->second->output;
    by_source_input_[{strip_newlines(p.source), p.input}] = {p.function_name, orig, p.output};
  }
}

std::string GroundTruthModel::name() const {
  std::string n = mode_ == Mode::Given ? "mock:ground-truth-given" : "mock:ground-truth-original";
  return letter_ == 'A' ? n : n + "@" + letter_;
}

ModelResponse GroundTruthModel::sample(const std::vector<Message>& messages, int) {
  if (messages.empty()) throw std::runtime_error("ground-truth model: no messages");
  const std::string& prompt = messages.back().content;
  ModelResponse r;
  r.ok = true;
  r.finish_reason = "stop";
  auto answer = [&](const std::string& program, const std::string& assertion_line) -> std::optional<std::string> {
    auto call = assertion_call(assertion_line);
    if (!call) return std::nullopt;
    auto it = by_source_input_.find({strip_newlines(program), call->second});
    if (it == by_source_input_.end()) return std::nullopt;
    const auto& out = mode_ == Mode::Given ? it->second.own_output : it->second.original_output;
    return "assert " + call->first + "(" + call->second + ") == " + out;
  };
  if (auto assertion = last_block(prompt, "[ASSERTION]\n", "\n[/ASSERTION]")) {
    const std::string tag = std::string("[PROGRAM_") + letter_ + "]\n";
    const std::string end = std::string("\n[/PROGRAM_") + letter_ + "]";
    auto program = last_block(prompt, tag, end);
    std::optional<std::string> a = program ? answer(*program, *assertion) : std::nullopt;
    if (!a) throw std::runtime_error("ground-truth model: choice prompt not in dataset");
    json j = {{"chosen_program", std::string(1, letter_)}, {"assertion", *a}};
    r.text = j.dump(4);
    return r;
  }
  auto block = last_block(prompt, "[PYTHON]\n", "\n[/PYTHON]");
  if (!block) throw std::runtime_error("ground-truth model: unrecognized prompt");
  auto cut = block->rfind("\nassert ");
  if (cut == std::string::npos) throw std::runtime_error("ground-truth model: no assertion");
  auto a = answer(block->substr(0, cut), block->substr(cut + 1));
  if (!a) throw std::runtime_error("ground-truth model: prediction prompt not in dataset");
  r.text = "[ANSWER]\n" + *a + "\n[/ANSWER]";
  return r;
}

std::shared_ptr<Model> make_model(const std::string& spec, const ModelConfig& config,
                                  const std::vector<Problem>& originals,
                                  const std::vector<Problem>& mutated) {
  auto ground_truth = [&](GroundTruthModel::Mode mode, const std::string& rest) {
    char letter = 'A';
    if (!rest.empty()) {
      if (rest.size() != 2 || rest[0] != '@' || (rest[1] != 'A' && rest[1] != 'B'))
        throw std::invalid_argument("bad choice letter suffix in '" + spec + "'");
      letter = rest[1];
    }
    return std::make_shared<GroundTruthModel>(mode, originals, mutated, letter);
  };
  const std::string given = "mock:ground-truth-given", original = "mock:ground-truth-original";
  if (spec.rfind(given, 0) == 0) return ground_truth(GroundTruthModel::Mode::Given, spec.substr(given.size()));
  if (spec.rfind(original, 0) == 0)
    return ground_truth(GroundTruthModel::Mode::Original, spec.substr(original.size()));
  if (spec.rfind("mock:fixed:", 0) == 0) return std::make_shared<FixedModel>(spec.substr(11));
  if (spec.rfind("mock:scripted:", 0) == 0) return std::make_shared<ScriptedModel>(spec.substr(14));
  if (spec.rfind("mock:", 0) == 0) throw std::invalid_argument("unknown mock model '" + spec + "'");
  ModelConfig c = config;
  c.model = spec;
  return std::make_shared<HttpChatModel>(c);
}

}  // namespace execbench::llm
