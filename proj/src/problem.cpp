#include "execbench/problem.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace execbench {

using nlohmann::json;

json to_json(const Problem& p) {
  json j = {{"id", p.id},
            {"dataset", p.dataset},
            {"source", p.source},
            {"function_name", p.function_name},
            {"input", p.input},
            {"output", p.output},
            {"loc", p.loc},
            {"executor", p.executor}};
  if (!p.program_id.empty()) j["program_id"] = p.program_id;
  if (!p.dsl.empty()) j["dsl"] = p.dsl;
  if (p.mutation)
    j["mutation_info"] = {{"kind", p.mutation->kind},
                          {"line", p.mutation->line},
                          {"original_token", p.mutation->original_token},
                          {"replacement_token", p.mutation->replacement_token}};
  return j;
}

Problem problem_from_json(const json& j) {
  Problem p;
  p.id = j.at("id").get<std::string>();
  p.dataset = j.value("dataset", "");
  p.source = j.at("source").get<std::string>();
  p.function_name = j.value("function_name", "f");
  p.input = j.at("input").get<std::string>();
  p.output = j.value("output", "");
  p.loc = j.value("loc", 0);
  p.executor = j.value("executor", "builtin");
  p.program_id = j.value("program_id", "");
  p.dsl = j.value("dsl", "");
  if (j.contains("mutation_info") && j["mutation_info"].is_object()) {
    const auto& m = j["mutation_info"];
    p.mutation = MutationInfo{m.value("kind", ""), m.value("line", 0), m.value("original_token", ""),
                              m.value("replacement_token", "")};
  }
  return p;
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<json> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Problem> load_problems(const std::string& path) {
  std::vector<Problem> out;
  for (const auto& j : read_jsonl(path)) out.push_back(problem_from_json(j));
  return out;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void save_problems(const std::string& path, const std::vector<Problem>& problems) {
  std::ostringstream s;
  for (const auto& p : problems) s << to_json(p).dump() << "\n";
  write_text_atomic(path, s.str());
}

void append_jsonl(const std::string& path, const json& j) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot append to " + path);
  out << j.dump() << "\n";
  out.flush();
}

}  // namespace execbench
