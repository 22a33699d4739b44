#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "execbench/metrics.hpp"

namespace execbench::metrics {

using harness::ChoiceRecord;
using harness::Judgment;
using harness::PredictionRecord;

std::optional<double> Rate::percent() const {
  if (den == 0) return std::nullopt;
  return 100.0 * num / static_cast<double>(den);
}

double pass_at_1(const std::vector<PredictionRecord>& records, Judgment target) {
  if (records.empty()) return 0.0;
  const auto hits = std::count_if(records.begin(), records.end(),
                                  [&](const PredictionRecord& r) { return r.judgment == target; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

namespace {

void add(Partition& p, Judgment j) {
  switch (j) {
    case Judgment::Correct: ++p.correct; break;
    case Judgment::Reverted: ++p.reverted; break;
    case Judgment::Other: ++p.other; break;
    case Judgment::Unparsed: ++p.unparsed; break;
  }
}

void add(Rate& r, double value) {
  r.num += value;
  ++r.den;
}

}  // namespace

PredictionMetrics prediction_metrics(const std::vector<PredictionRecord>& records) {
  // sorted grouping keeps the floating-point sums independent of record order
  std::map<std::pair<std::string, std::string>, std::vector<PredictionRecord>> groups;
  for (const auto& r : records) groups[{r.problem_id, r.variant}].push_back(r);

  PredictionMetrics m;
  std::set<std::string> problems, booleans;
  for (const auto& [key, recs] : groups) {
    const bool original = key.second == "original";
    const bool boolean = std::any_of(recs.begin(), recs.end(), [](const auto& r) { return r.bool_output; });
    problems.insert(key.first);
    if (boolean) booleans.insert(key.first);
    for (const auto& r : recs) add(original ? m.original : m.mutated, r.judgment);
    add(original ? m.oc : m.mc, pass_at_1(recs, Judgment::Correct));
    add(original ? m.other_original : m.other_mutated, pass_at_1(recs, Judgment::Other));
    add(original ? m.unparsed_original : m.unparsed_mutated, pass_at_1(recs, Judgment::Unparsed));
    if (!boolean) add(original ? m.orr : m.mr, pass_at_1(recs, Judgment::Reverted));
  }
  m.problems = static_cast<long>(problems.size());
  m.boolean_excluded = static_cast<long>(booleans.size());
  return m;
}

ChoiceMetrics choice_metrics(const std::vector<ChoiceRecord>& records) {
  ChoiceMetrics m;
  for (const auto& r : records) {
    ++m.runs;
    if (r.chosen == "unparsed") {
      ++m.unparsed_choice;
      continue;
    }
    const bool original = r.chosen == "original";
    add(m.pref, original ? 1.0 : 0.0);
    add(original ? m.oc : m.mc, r.judgment == Judgment::Correct ? 1.0 : 0.0);
    if (!r.bool_output) add(original ? m.orr : m.mr, r.judgment == Judgment::Reverted ? 1.0 : 0.0);
  }
  return m;
}

std::vector<Bin> default_bins() { return {{4, 8}, {8, 12}, {12, 16}, {16, 20}, {20, 24}}; }

std::vector<SeriesRow> loc_series(const std::vector<PredictionRecord>& records, const std::vector<Bin>& bins) {
  std::vector<SeriesRow> rows;
  for (const auto& b : bins) {
    std::vector<PredictionRecord> in;
    for (const auto& r : records)
      if (r.loc >= b.lo && r.loc < b.hi) in.push_back(r);
    SeriesRow row;
    row.bin = b;
    row.metrics = prediction_metrics(in);
    row.problems = row.metrics.problems;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string number(const Rate& r, const char* missing) {
  auto p = r.percent();
  if (!p) return missing;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *p);
  return buf;
}

std::string series_text(const std::vector<SeriesRow>& rows, const char* sep, const char* missing, bool header) {
  std::ostringstream s;
  if (header) s << "bin_lo" << sep << "bin_hi" << sep << "problems" << sep << "oc" << sep << "mc" << sep << "or"
                << sep << "mr\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    s << r.bin.lo << sep << r.bin.hi << sep << r.problems << sep << number(m.oc, missing) << sep
      << number(m.mc, missing) << sep << number(m.orr, missing) << sep << number(m.mr, missing) << "\n";
  }
  return s.str();
}

}  // namespace

std::string series_csv(const std::vector<SeriesRow>& rows) { return series_text(rows, ",", "null", true); }

std::string series_dat(const std::vector<SeriesRow>& rows) {
  return "# bin_lo bin_hi problems oc mc or mr\n" + series_text(rows, " ", "NaN", false);
}

std::vector<ReportRow> build_report(const std::vector<PredictionRecord>& prediction,
                                    const std::vector<ChoiceRecord>& choice) {
  std::map<std::pair<std::string, std::string>, std::vector<PredictionRecord>> pred;
  std::map<std::pair<std::string, std::string>, std::vector<ChoiceRecord>> ch;
  for (const auto& r : prediction) pred[{r.dataset, r.model}].push_back(r);
  for (const auto& r : choice) ch[{r.dataset, r.model}].push_back(r);
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& [k, _] : pred) keys.insert(k);
  for (const auto& [k, _] : ch) keys.insert(k);
  std::vector<ReportRow> rows;
  for (const auto& k : keys) {
    ReportRow row{k.first, k.second, std::nullopt, std::nullopt};
    if (auto it = pred.find(k); it != pred.end()) row.prediction = prediction_metrics(it->second);
    if (auto it = ch.find(k); it != ch.end()) row.choice = choice_metrics(it->second);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_percent(const Rate& r) {
  auto p = r.percent();
  char buf[48];
  if (!p)
    std::snprintf(buf, sizeof buf, "- (n=0)");
  else
    std::snprintf(buf, sizeof buf, "%.1f (n=%ld)", *p, r.den);
  return buf;
}

std::string report_table(const std::vector<ReportRow>& rows) {
  const std::vector<std::string> header{"dataset", "model", "OC",   "MC",   "OR",   "MR",    "other", "unparsed",
                                        "Pref",    "c.OC",  "c.MC", "c.OR", "c.MR", "c.unparsed"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    std::vector<std::string> line{r.dataset, r.model};
    if (r.prediction) {
      const auto& p = *r.prediction;
      const long samples = p.original.total() + p.mutated.total();
      line.push_back(format_percent(p.oc));
      line.push_back(format_percent(p.mc));
      line.push_back(format_percent(p.orr));
      line.push_back(format_percent(p.mr));
      line.push_back(format_percent({double(p.original.other + p.mutated.other), samples}));
      line.push_back(format_percent({double(p.original.unparsed + p.mutated.unparsed), samples}));
    } else {
      line.insert(line.end(), 6, "-");
    }
    if (r.choice) {
      const auto& c = *r.choice;
      line.push_back(format_percent(c.pref));
      line.push_back(format_percent(c.oc));
      line.push_back(format_percent(c.mc));
      line.push_back(format_percent(c.orr));
      line.push_back(format_percent(c.mr));
      line.push_back(std::to_string(c.unparsed_choice) + "/" + std::to_string(c.runs));
    } else {
      line.insert(line.end(), 6, "-");
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::ostringstream s;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) s << "  ";
      s << line[i];
      if (i + 1 < line.size()) s << std::string(width[i] - line[i].size(), ' ');
    }
    s << "\n";
  }
  return s.str();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  s << "dataset,model,metric,percent,numerator,denominator\n";
  auto emit = [&](const ReportRow& r, const char* name, const Rate& rate) {
    char num[32];
    std::snprintf(num, sizeof num, "%.6g", rate.num);
    s << r.dataset << "," << r.model << "," << name << "," << number(rate, "null") << "," << num << "," << rate.den
      << "\n";
  };
  for (const auto& r : rows) {
    if (r.prediction) {
      const auto& p = *r.prediction;
      emit(r, "pred.OC", p.oc);
      emit(r, "pred.MC", p.mc);
      emit(r, "pred.OR", p.orr);
      emit(r, "pred.MR", p.mr);
      emit(r, "pred.other.original", p.other_original);
      emit(r, "pred.other.mutated", p.other_mutated);
      emit(r, "pred.unparsed.original", p.unparsed_original);
      emit(r, "pred.unparsed.mutated", p.unparsed_mutated);
    }
    if (r.choice) {
      const auto& c = *r.choice;
      emit(r, "choice.Pref", c.pref);
      emit(r, "choice.OC", c.oc);
      emit(r, "choice.MC", c.mc);
      emit(r, "choice.OR", c.orr);
      emit(r, "choice.MR", c.mr);
      emit(r, "choice.unparsed", {double(c.unparsed_choice), c.runs});
    }
  }
  return s.str();
}

}  // namespace execbench::metrics
