#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "ewn/csv.hpp"
#include "ewn/error.hpp"
#include "ewn/metrics.hpp"
#include "ewn/report.hpp"
#include "ewn/scenario.hpp"
#include "json.hpp"

using namespace ewn;
namespace fs = std::filesystem;

namespace {

ScenarioConfig toy_config(const std::string& name, const FlexibilityFlags& flex) {
  ScenarioConfig c;
  c.name = name;
  c.case_path = fs::path(EWN_FIXTURES) / "toy3";
  c.output_dir = fs::temp_directory_path() / "ewn_test_report";
  c.days = 1;
  c.seed = 3;
  c.flex = flex;
  c.wind.mae_day_ahead = 0.15;
  c.wind.mae_short_term = 0.05;
  c.load.mae_day_ahead = 0.03;
  c.load.mae_short_term = 0.01;
  c.histogram_bins = 20;
  return c;
}

struct Run {
  ScenarioResults results;
  MetricsReport metrics;
  fs::path dir;
};

const Run& toy_run(bool flexible) {
  static const auto make = [](bool f) {
    Run r;
    const ScenarioConfig cfg = toy_config(f ? "toy_flex" : "toy_conv",
                                          f ? FlexibilityFlags::flexible() : FlexibilityFlags::conventional());
    r.results = run_scenario(cfg);
    r.metrics = compute_metrics(r.results);
    r.dir = scenario_dir(cfg);
    fs::remove_all(r.dir);
    export_report(r.results, r.metrics, r.dir);
    return r;
  };
  static const Run flex = make(true), conv = make(false);
  return flexible ? flex : conv;
}

double column_sum(const fs::path& file, const std::string& col) {
  const CsvTable t = CsvTable::read(file);
  double s = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) s += t.number(i, col);
  return s;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("duration_curve: sorted descending with fractions (i+1)/n") {
  const DurationCurve d = duration_curve({3.0, 1.0, 2.0});
  CHECK(d.value == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(d.fraction[0] == doctest::Approx(1.0 / 3.0));
  CHECK(d.fraction[2] == 1.0);
  const DurationCurve flat = duration_curve(std::vector<double>(5, 7.0));
  for (double v : flat.value) CHECK(v == 7.0);
  CHECK_THROWS_AS(duration_curve({}), ParameterError);
}

TEST_CASE("saturation_fraction matches a direct count on clamped series") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> N(0.0, 35.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> reg;
    long count = 0;
    for (int i = 0; i < 1000; ++i) {
      reg.push_back(-std::clamp(N(rng), -40.0, 40.0));
      count += std::abs(reg.back()) == 40.0;
    }
    CHECK(saturation_fraction(reg, 40.0) == doctest::Approx(count / 1000.0).epsilon(1e-15));
  }
  CHECK(saturation_fraction({}, 40.0) == 0.0);
}

TEST_CASE("histogram: bin count, edges and mass") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  std::vector<double> x;
  for (int i = 0; i < 999; ++i) x.push_back(U(rng));
  x.push_back(5.0);
  const Histogram h = histogram(x, 25, -5.0, 5.0);
  CHECK(h.counts.size() == 25u);
  CHECK(h.edges.size() == 26u);
  CHECK(h.edges.front() == -5.0);
  CHECK(h.edges.back() == 5.0);
  long total = 0;
  for (long c : h.counts) total += c;
  CHECK(total == 1000);
  CHECK(h.counts.back() >= 1);  // the right edge is closed
  const Histogram narrow = histogram(x, 10, 0.0, 1.0);
  long in = 0;
  for (double v : x) in += v >= 0.0 && v <= 1.0;
  long got = 0;
  for (long c : narrow.counts) got += c;
  CHECK(got == in);
  const Histogram flat = histogram(std::vector<double>(4, 2.0), 3);
  CHECK(flat.edges.front() == 1.5);
  CHECK(flat.edges.back() == 2.5);
}

TEST_CASE("compute_metrics: series lengths follow the timescales") {
  const Run& r = toy_run(true);
  CHECK(r.metrics.days == 1);
  CHECK(r.metrics.steps == 288);
  CHECK(r.metrics.minutes == 1440);
  CHECK(r.metrics.regulation.size() == 1440u);
  CHECK(r.metrics.withdrawal.size() == 1440u);
  CHECK(r.metrics.lfr_up.size() == 288u);
  CHECK(r.metrics.net_load.size() == 1440u);
  for (double v : r.metrics.regulation) CHECK(std::abs(v) <= r.metrics.regulation_capacity + 1e-12);
}

TEST_CASE("export_report: JSON totals equal the sums of the exported minute columns") {
  const Run& r = toy_run(true);
  const nlohmann::json j = read_json(r.dir / "summary.json");
  const fs::path ewn = r.dir / "ewn" / "minutes.csv";
  CHECK(j["water"]["withdrawal_kg"].get<double>() == doctest::Approx(column_sum(ewn, "withdrawal_kg")).epsilon(1e-12));
  CHECK(j["water"]["evaporation_kg"].get<double>() ==
        doctest::Approx(column_sum(ewn, "evaporation_kg")).epsilon(1e-12));
  CHECK(j["fuel_kt"]["total"].get<double>() == doctest::Approx(column_sum(ewn, "fuel_kg") / 1e6).epsilon(1e-12));
  CHECK(j["co2_kt"]["total"].get<double>() == doctest::Approx(column_sum(ewn, "co2_kg") / 1e6).epsilon(1e-12));
  CHECK(j["costs"]["real_time"].get<double>() ==
        doctest::Approx(column_sum(r.dir / "sced" / "steps.csv", "objective")).epsilon(1e-12));
  CHECK(j["costs"]["day_ahead"].get<double>() ==
        doctest::Approx(column_sum(r.dir / "scuc" / "days.csv", "objective")).epsilon(1e-12));
  CHECK(j["water"]["withdrawal_m3"].get<double>() ==
        doctest::Approx(j["water"]["withdrawal_kg"].get<double>() / 998.0).epsilon(1e-12));
  CHECK(j["net_load"].contains("negative_percent"));
}

TEST_CASE("export_report: the result tree has the documented layout") {
  const Run& r = toy_run(true);
  for (const char* f : {"summary.json", "config.txt", "scuc/days.csv", "scuc/schedule.csv", "scuc/reserves.csv",
                        "sced/steps.csv", "minutes/system.csv", "minutes/minutes.csv", "ewn/minutes.csv",
                        "ewn/generators.csv", "ewn/summary.json", "duration/regulation.csv"})
    CHECK_MESSAGE(fs::exists(r.dir / f), f);
  for (const std::string& name : histogram_series_names()) {
    const CsvTable t = CsvTable::read(r.dir / "histograms" / (name + ".csv"));
    CHECK_MESSAGE(t.rows() == 20u, name);
  }
  CHECK(CsvTable::read(r.dir / "minutes" / "system.csv").rows() == 1440u);
  CHECK(CsvTable::read(r.dir / "sced" / "steps.csv").rows() == 288u);
  CHECK(CsvTable::read(r.dir / "scuc" / "days.csv").rows() == 1u);
}

TEST_CASE("export_report: the binary minute log holds rows x columns float64 values") {
  ScenarioConfig cfg = toy_config("toy_bin", FlexibilityFlags::flexible());
  cfg.minute_log = MinuteLog::binary;
  const Run& base = toy_run(true);
  const fs::path dir = scenario_dir(cfg);
  fs::remove_all(dir);
  ScenarioResults res = base.results;
  res.config = cfg;
  export_report(res, base.metrics, dir);
  std::ifstream cols(dir / "minutes" / "minutes_columns.txt");
  std::vector<std::string> names;
  for (std::string s; std::getline(cols, s);)
    if (!s.empty()) names.push_back(s);
  REQUIRE(!names.empty());
  CHECK(fs::file_size(dir / "minutes" / "minutes.bin") == 1440u * names.size() * sizeof(double));
  CHECK_FALSE(fs::exists(dir / "minutes" / "minutes.csv"));
}

TEST_CASE("load_scenario reads back what export_report wrote") {
  const Run& r = toy_run(true);
  const StoredScenario mem = stored_scenario(r.results, r.metrics);
  const StoredScenario disk = load_scenario(r.dir);
  CHECK(disk.name == mem.name);
  CHECK(disk.fingerprint == mem.fingerprint);
  CHECK(disk.histogram_bins == 20);
  CHECK(disk.flex.water_dr_enabled == mem.flex.water_dr_enabled);
  CHECK(disk.metrics.withdrawal_kg == mem.metrics.withdrawal_kg);
  CHECK(disk.metrics.day_ahead_cost == mem.metrics.day_ahead_cost);
  CHECK(disk.metrics.fuel_kt == mem.metrics.fuel_kt);
  CHECK(disk.metrics.saturation == mem.metrics.saturation);
  CHECK(disk.metrics.regulation == mem.metrics.regulation);
  CHECK(disk.metrics.lfr_up == mem.metrics.lfr_up);
  CHECK(disk.metrics.withdrawal == mem.metrics.withdrawal);
  CHECK(disk.metrics.net_load == mem.metrics.net_load);
  CHECK_THROWS_AS(load_scenario(r.dir / "nope"), LoadError);
}

TEST_CASE("compare_scenarios: a scenario against itself differs by nothing") {
  const Run& r = toy_run(true);
  const StoredScenario s = stored_scenario(r.results, r.metrics);
  const ComparisonReport rep = compare_scenarios(s, s);
  for (const ComparisonRow& row : rep.rows) {
    CHECK_MESSAGE(row.difference == 0.0, row.metric);
    REQUIRE_MESSAGE(row.percent.has_value(), row.metric);
    CHECK_MESSAGE(*row.percent == 0.0, row.metric);
  }
  for (const JointHistogram& h : rep.histograms) CHECK(h.flexible.counts == h.conventional.counts);
}

TEST_CASE("compare_scenarios: differences and percentages follow conventional minus flexible") {
  const StoredScenario flex = stored_scenario(toy_run(true).results, toy_run(true).metrics);
  const StoredScenario conv = stored_scenario(toy_run(false).results, toy_run(false).metrics);
  REQUIRE(flex.fingerprint == conv.fingerprint);
  const ComparisonReport rep = compare_scenarios(flex, conv);
  const double a = flex.metrics.withdrawal_kg / 998.0, b = conv.metrics.withdrawal_kg / 998.0;
  const ComparisonRow& w = rep.row("water_withdrawal");
  CHECK(w.flexible == doctest::Approx(a).epsilon(1e-14));
  CHECK(w.difference == doctest::Approx(b - a).epsilon(1e-12));
  CHECK(*w.percent == doctest::Approx(100.0 * (b - a) / b).epsilon(1e-12));
  REQUIRE(rep.withdrawal_percent_difference.has_value());
  CHECK(*rep.withdrawal_percent_difference == *w.percent);
  const ComparisonRow& cost = rep.row("day_ahead_cost");
  CHECK(*cost.percent == doctest::Approx(100.0 * (conv.metrics.day_ahead_cost - flex.metrics.day_ahead_cost) /
                                         conv.metrics.day_ahead_cost));
  CHECK_NOTHROW(rep.row("net_load_negative"));
  CHECK_NOTHROW(rep.row("fuel_coal"));
  CHECK_NOTHROW(rep.row("co2_total"));
  CHECK_NOTHROW(rep.row("regulation_saturation_up"));
  CHECK_THROWS_AS(rep.row("bogus"), ParameterError);
  for (const JointHistogram& h : rep.histograms) CHECK(h.flexible.edges == h.conventional.edges);
}

TEST_CASE("compare_scenarios: percentages with a zero conventional value") {
  StoredScenario a = stored_scenario(toy_run(true).results, toy_run(true).metrics);
  StoredScenario b = a;
  a.metrics.slack_mwh = 2.0;
  b.metrics.slack_mwh = 0.0;
  CHECK_FALSE(compare_scenarios(a, b).row("slack_energy").percent.has_value());
  a.metrics.slack_mwh = 0.0;
  CHECK(*compare_scenarios(a, b).row("slack_energy").percent == 0.0);
}

TEST_CASE("compare_scenarios: different inputs are refused") {
  const Run& r = toy_run(true);
  StoredScenario a = stored_scenario(r.results, r.metrics), b = a;
  ScenarioConfig other = r.results.config;
  other.seed = 4;
  b.fingerprint = scenario_fingerprint(other);
  CHECK_THROWS_AS(compare_scenarios(a, b), ComparisonError);
  other = r.results.config;
  other.days = 2;
  b.fingerprint = scenario_fingerprint(other);
  CHECK_THROWS_AS(compare_scenarios(a, b), ComparisonError);
  other = r.results.config;
  other.flex = FlexibilityFlags::conventional();
  other.name = "renamed";
  other.output_dir = "/elsewhere";
  CHECK(scenario_fingerprint(other) == a.fingerprint);
}

TEST_CASE("write_comparison: csv, json and joint histograms") {
  const StoredScenario flex = stored_scenario(toy_run(true).results, toy_run(true).metrics);
  const StoredScenario conv = stored_scenario(toy_run(false).results, toy_run(false).metrics);
  const ComparisonReport rep = compare_scenarios(flex, conv);
  const fs::path out = fs::temp_directory_path() / "ewn_test_report" / "cmp";
  fs::remove_all(out);
  write_comparison(rep, out);
  CHECK(CsvTable::read(out / "comparison.csv").rows() == rep.rows.size());
  const nlohmann::json j = read_json(out / "comparison.json");
  CHECK(j.contains("withdrawal_percent_difference"));
  CHECK(j["flexible"] == "toy_flex");
  CHECK(j["conventional"] == "toy_conv");
  for (const char* t : {"fuel_kt", "co2_kt", "curtailment"}) CHECK(fs::exists(out / "tables" / (std::string(t) + ".csv")));
  const CsvTable h = CsvTable::read(out / "histograms" / "regulation.csv");
  CHECK(h.rows() == 20u);
  double fa = 0.0, fb = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    fa += h.number(i, "flexible");
    fb += h.number(i, "conventional");
  }
  CHECK(fa == 1440.0);
  CHECK(fb == 1440.0);
}
