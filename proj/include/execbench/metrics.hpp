#pragma once

// Aggregation of prediction and choice records into OC/MC/OR/MR/Pref,
// LOC-binned series and report rendering.

#include <optional>
#include <string>
#include <vector>

#include "execbench/harness.hpp"

namespace execbench::metrics {

/// A percentage with its denominator; value is nullopt when den == 0.
struct Rate {
  double num = 0;
  long den = 0;
  std::optional<double> percent() const;
};

/// count(judgment == target) / records.size().
double pass_at_1(const std::vector<harness::PredictionRecord>& records, harness::Judgment target);

struct Partition {
  long correct = 0, reverted = 0, other = 0, unparsed = 0;
  long total() const { return correct + reverted + other + unparsed; }
};

struct PredictionMetrics {
  Rate oc, mc, orr, mr;
  Rate other_original, other_mutated, unparsed_original, unparsed_mutated;
  long problems = 0;
  long boolean_excluded = 0;
  Partition original, mutated;  // per-sample counts
};

PredictionMetrics prediction_metrics(const std::vector<harness::PredictionRecord>& records);

struct ChoiceMetrics {
  Rate pref, oc, mc, orr, mr;
  long runs = 0;
  long unparsed_choice = 0;  // runs excluded from Pref
};

ChoiceMetrics choice_metrics(const std::vector<harness::ChoiceRecord>& records);

struct Bin {
  int lo = 0, hi = 0;  // [lo, hi)
};
/// [4,8) [8,12) [12,16) [16,20) [20,24).
std::vector<Bin> default_bins();

struct SeriesRow {
  Bin bin;
  long problems = 0;
  PredictionMetrics metrics;
};
std::vector<SeriesRow> loc_series(const std::vector<harness::PredictionRecord>& records,
                                  const std::vector<Bin>& bins);

/// Columns: bin_lo,bin_hi,problems,oc,mc,or,mr with empty cells as `null`.
std::string series_csv(const std::vector<SeriesRow>& rows);
/// Whitespace-separated columns for plotting; empty cells as NaN.
std::string series_dat(const std::vector<SeriesRow>& rows);

struct ReportRow {
  std::string dataset;
  std::string model;
  std::optional<PredictionMetrics> prediction;
  std::optional<ChoiceMetrics> choice;
};

/// Groups records by (dataset, model).
std::vector<ReportRow> build_report(const std::vector<harness::PredictionRecord>& prediction,
                                    const std::vector<harness::ChoiceRecord>& choice);

std::string format_percent(const Rate& r);
std::string report_table(const std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace execbench::metrics
