#include <algorithm>
#include <random>

#include "doctest.h"
#include "execbench/metrics.hpp"

using namespace execbench;
using namespace execbench::harness;
using namespace execbench::metrics;

namespace {

PredictionRecord rec(std::string id, std::string variant, int sample, Judgment j, int loc = 5, bool boolean = false) {
  PredictionRecord r;
  r.problem_id = std::move(id);
  r.variant = std::move(variant);
  r.sample = sample;
  r.judgment = j;
  r.loc = loc;
  r.bool_output = boolean;
  r.model = "m";
  r.dataset = "d";
  return r;
}

ChoiceRecord choice(std::string id, int run, std::string chosen, Judgment j, bool boolean = false) {
  ChoiceRecord r;
  r.problem_id = std::move(id);
  r.run = run;
  r.chosen = std::move(chosen);
  r.judgment = j;
  r.bool_output = boolean;
  r.model = "m";
  r.dataset = "d";
  return r;
}

std::vector<PredictionRecord> sample_records() {
  std::vector<PredictionRecord> rs;
  const Judgment cycle[] = {Judgment::Correct, Judgment::Reverted, Judgment::Other, Judgment::Unparsed,
                            Judgment::Correct, Judgment::Correct, Judgment::Reverted};
  int k = 0;
  for (int p = 0; p < 12; ++p)
    for (const char* v : {"original", "mutated"})
      for (int s = 0; s < 5; ++s)
        rs.push_back(rec("p" + std::to_string(p), v, s, cycle[k++ % 7], 4 + p * 19 / 11, p == 3));
  return rs;
}

}  // namespace

TEST_CASE("pass@1 over five samples") {
  std::vector<PredictionRecord> rs;
  for (int s = 0; s < 5; ++s) rs.push_back(rec("a", "original", s, s < 3 ? Judgment::Correct : Judgment::Other));
  CHECK(pass_at_1(rs, Judgment::Correct) == doctest::Approx(0.6));
  auto m = prediction_metrics(rs);
  REQUIRE(m.oc.percent());
  CHECK(*m.oc.percent() == doctest::Approx(60.0));
  CHECK_FALSE(m.mc.percent());
  CHECK(m.original.total() == 5);
}

TEST_CASE("prediction metrics against hand counts") {
  std::vector<PredictionRecord> rs = {
      rec("a", "original", 0, Judgment::Correct), rec("a", "original", 1, Judgment::Reverted),
      rec("a", "mutated", 0, Judgment::Reverted), rec("a", "mutated", 1, Judgment::Reverted),
      rec("b", "original", 0, Judgment::Other, 5, true), rec("b", "original", 1, Judgment::Correct, 5, true),
      rec("b", "mutated", 0, Judgment::Reverted, 5, true), rec("b", "mutated", 1, Judgment::Unparsed, 5, true),
  };
  auto m = prediction_metrics(rs);
  CHECK(m.problems == 2);
  CHECK(m.boolean_excluded == 1);
  CHECK(*m.oc.percent() == doctest::Approx(50.0));
  CHECK(*m.mc.percent() == doctest::Approx(0.0));
  CHECK(m.orr.den == 1);
  CHECK(*m.orr.percent() == doctest::Approx(50.0));
  CHECK(*m.mr.percent() == doctest::Approx(100.0));
  CHECK(*m.unparsed_mutated.percent() == doctest::Approx(25.0));
  CHECK(m.mutated.reverted == 3);
}

TEST_CASE("choice metrics") {
  std::vector<ChoiceRecord> rs = {choice("a", 1, "original", Judgment::Correct),
                                  choice("a", 2, "mutated", Judgment::Reverted),
                                  choice("b", 1, "original", Judgment::Other),
                                  choice("b", 2, "unparsed", Judgment::Unparsed)};
  auto m = choice_metrics(rs);
  CHECK(m.runs == 4);
  CHECK(m.unparsed_choice == 1);
  CHECK(m.pref.den == 3);
  CHECK(*m.pref.percent() == doctest::Approx(200.0 / 3.0));
  CHECK(*m.oc.percent() == doctest::Approx(50.0));
  CHECK(*m.mr.percent() == doctest::Approx(100.0));
  CHECK(*choice_metrics({choice("a", 1, "original", Judgment::Correct),
                         choice("a", 2, "original", Judgment::Correct)})
             .pref.percent() == 100.0);
}

TEST_CASE("metrics are invariant to record order") {
  auto rs = sample_records();
  auto base = prediction_metrics(rs);
  std::mt19937 g(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(rs.begin(), rs.end(), g);
    auto m = prediction_metrics(rs);
    CHECK(m.oc.num == base.oc.num);
    CHECK(m.mr.num == base.mr.num);
    CHECK(m.orr.den == base.orr.den);
    CHECK(series_csv(loc_series(rs, default_bins())) == series_csv(loc_series(sample_records(), default_bins())));
  }
}

TEST_CASE("bins re-aggregate to the whole") {
  auto rs = sample_records();
  auto whole = prediction_metrics(rs);
  double oc = 0, mr = 0;
  long oc_den = 0, mr_den = 0, problems = 0;
  for (const auto& row : loc_series(rs, default_bins())) {
    oc += row.metrics.oc.num;
    oc_den += row.metrics.oc.den;
    mr += row.metrics.mr.num;
    mr_den += row.metrics.mr.den;
    problems += row.problems;
  }
  CHECK(oc == doctest::Approx(whole.oc.num));
  CHECK(oc_den == whole.oc.den);
  CHECK(mr == doctest::Approx(whole.mr.num));
  CHECK(mr_den == whole.mr.den);
  CHECK(problems == whole.problems);
}

TEST_CASE("empty bins are null") {
  std::vector<PredictionRecord> rs = {rec("a", "original", 0, Judgment::Correct, 5),
                                      rec("a", "mutated", 0, Judgment::Reverted, 5)};
  const auto csv = series_csv(loc_series(rs, default_bins()));
  CHECK(csv.rfind("bin_lo,bin_hi,problems,oc,mc,or,mr\n4,8,1,100.0000,0.0000,0.0000,100.0000\n", 0) == 0);
  CHECK(csv.find("8,12,0,null,null,null,null\n") != std::string::npos);
  const auto dat = series_dat(loc_series(rs, default_bins()));
  CHECK(dat.find("20 24 0 NaN NaN NaN NaN\n") != std::string::npos);
}

TEST_CASE("report rendering") {
  auto rows = build_report(sample_records(), {choice("p1", 1, "original", Judgment::Correct)});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].dataset == "d");
  REQUIRE(rows[0].prediction);
  REQUIRE(rows[0].choice);
  CHECK(format_percent({3, 5}) == "60.0 (n=5)");
  CHECK(format_percent({0, 0}).find("n=0") != std::string::npos);
  CHECK(report_table(rows).find("OC") != std::string::npos);
  CHECK(report_csv(rows).rfind("dataset,model,metric,percent,numerator,denominator\n", 0) == 0);
}
