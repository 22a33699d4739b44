#pragma once

// Loader for fixtures/differential_programs.txt.

#include <fstream>
#include <string>
#include <vector>

namespace execbench::testing {

struct DifferentialCase {
  std::string name;
  std::string source;
  std::vector<std::string> inputs;
};

inline std::vector<DifferentialCase> load_differential(const std::string& path) {
  std::ifstream in(path);
  std::vector<DifferentialCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("### ", 0) == 0) {
      out.push_back({line.substr(4), "", {}});
    } else if (line.rfind(">>> ", 0) == 0) {
      out.back().inputs.push_back(line.substr(4));
    } else if (!out.empty() && out.back().inputs.empty()) {
      out.back().source += line + "\n";
    }
  }
  for (auto& c : out)
    while (c.source.size() > 1 && c.source[c.source.size() - 2] == '\n') c.source.pop_back();
  return out;
}

}  // namespace execbench::testing
