#include <set>

#include "execbench/datasets.hpp"
#include "execbench/transpile.hpp"

namespace execbench::datasets {

using nlohmann::json;

std::size_t char_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

IngestResult ingest_external(const std::string& path, Executor& executor, const IngestConfig& config) {
  return ingest_external(read_jsonl(path), executor, config);
}

IngestResult ingest_external(const std::vector<json>& records, Executor& executor, const IngestConfig& config) {
  IngestResult result;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const json& r = records[i];
    const std::string id = r.contains("id") ? r["id"].get<std::string>() : "ext-" + std::to_string(i);
    if (!r.contains("source") || !r.contains("function_name") || !r.contains("input")) {
      result.rejections.push_back({id, "missing field"});
      continue;
    }
    Problem p;
    p.id = id;
    p.dataset = "external";
    p.source = r["source"].get<std::string>();
    p.function_name = r["function_name"].get<std::string>();
    p.input = r["input"].get<std::string>();
    p.executor = executor.kind();
    p.program_id = r.value("program_id", id);
    p.loc = transpile::loc(p.source);

    const std::size_t length = char_length(p.source);
    if (length < config.min_chars || length > config.max_chars) {
      result.rejections.push_back({id, "length " + std::to_string(length) + " outside [" +
                                           std::to_string(config.min_chars) + ", " +
                                           std::to_string(config.max_chars) + "]"});
      continue;
    }
    if (!seen.insert({p.source, p.input}).second) {
      result.rejections.push_back({id, "duplicate"});
      continue;
    }
    const ExecRequest req{p.source, p.function_name, p.input, true};
    auto first = executor.run(req);
    if (!first.ok()) {
      result.rejections.push_back(
          {id, "execution failed: " + (first.error_kind.empty() ? std::string(status_name(first.status)) : first.error_kind)});
      continue;
    }
    if (first.steps > config.max_steps) {
      result.rejections.push_back({id, "step count " + std::to_string(first.steps) + " exceeds " +
                                           std::to_string(config.max_steps)});
      continue;
    }
    auto second = executor.run(req);
    if (!second.ok() || second.output_repr != first.output_repr) {
      result.rejections.push_back({id, "nondeterministic"});
      continue;
    }
    p.output = first.output_repr;
    result.problems.push_back(std::move(p));
  }
  return result;
}

}  // namespace execbench::datasets
