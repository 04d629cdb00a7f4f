#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ewn/config.hpp"
#include "ewn/error.hpp"
#include "ewn/grid_model.hpp"
#include "ewn/metrics.hpp"
#include "ewn/report.hpp"
#include "ewn/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

int cmd_run(const std::string& config_path, const std::string& output) {
  ewn::ScenarioConfig cfg = ewn::load_config(config_path);
  if (!output.empty()) cfg.output_dir = output;
  const ewn::ScenarioResults res = ewn::run_scenario(cfg);
  const ewn::MetricsReport m = ewn::compute_metrics(res);
  const auto dir = ewn::scenario_dir(cfg);
  ewn::export_report(res, m, dir);
  std::printf("scenario %s: %d days, %ld steps, %ld minutes\n", cfg.name.c_str(), m.days, m.steps, m.minutes);
  std::printf("  day-ahead cost   %.2f $\n", m.day_ahead_cost);
  std::printf("  real-time cost   %.2f $\n", m.real_time_cost);
  std::printf("  fuel             %.6f kt\n", m.fuel_total_kt);
  std::printf("  CO2              %.6f kt\n", m.co2_total_kt);
  std::printf("  withdrawal       %.3f m3\n", m.withdrawal_kg / m.rho_water);
  std::printf("  saturation       %.4f %%\n", 100.0 * m.saturation);
  std::printf("  results in %s\n", dir.string().c_str());
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out) {
  const ewn::StoredScenario flex = ewn::load_scenario(a);
  const ewn::StoredScenario conv = ewn::load_scenario(b);
  if (!flex.flex.water_dr_enabled && !flex.flex.hydro_curtailable &&
      (conv.flex.water_dr_enabled || conv.flex.hydro_curtailable))
    std::fprintf(stderr, "warning: the first directory is the less flexible scenario; the order is flexible then conventional\n");
  const ewn::ComparisonReport rep = ewn::compare_scenarios(flex, conv);
  ewn::write_comparison(rep, out);
  for (const char* metric : {"day_ahead_cost", "real_time_cost", "fuel_total", "co2_total", "water_withdrawal",
                             "regulation_saturation"}) {
    const ewn::ComparisonRow& r = rep.row(metric);
    std::printf("%-22s %16.6g %16.6g %12.4g %s\n", r.metric.c_str(), r.flexible, r.conventional, r.difference,
                r.percent ? (std::to_string(*r.percent) + " %").c_str() : "n/a");
  }
  std::printf("comparison written to %s\n", out.c_str());
  return 0;
}

int cmd_validate(const std::string& case_dir) {
  const ewn::GridCase c = ewn::load_case(case_dir);
  ewn::validate_case(c);
  std::printf("case %s is valid: %zu buses, %zu lines, %zu generators, %zu storage, %zu DR, %zu VER, %zu zones, "
              "%d minutes\n",
              case_dir.c_str(), c.buses.size(), c.lines.size(), c.generators.size(), c.storage.size(),
              c.dr_units.size(), c.var_resources.size(), c.load_zones.size(), c.minutes());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-water nexus co-simulation: unit commitment, dispatch, regulation and water accounting"};
  app.require_subcommand(1);

  std::string config, output;
  CLI::App* run = app.add_subcommand("run", "Run one scenario and write its result tree");
  run->add_option("--config", config, "Scenario config file")->required();
  run->add_option("--output", output, "Override the config's output directory");

  std::string dir_a, dir_b, out;
  CLI::App* compare = app.add_subcommand("compare", "Compare a flexible and a conventional result tree");
  compare->add_option("dirA", dir_a, "Flexible scenario result directory")->required();
  compare->add_option("dirB", dir_b, "Conventional scenario result directory")->required();
  compare->add_option("--out", out, "Directory for the comparison files")->required();

  std::string case_dir;
  CLI::App* validate = app.add_subcommand("validate", "Load and validate a case directory");
  validate->add_option("--case", case_dir, "Case directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config, output);
    if (*compare) return cmd_compare(dir_a, dir_b, out);
    if (*validate) return cmd_validate(case_dir);
  } catch (const ewn::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const ewn::ValidationError& e) {
    std::fprintf(stderr, "validation failure: %s\n", e.what());
    return kExitValidation;
  } catch (const ewn::Error& e) {
    // Load, dimension and parameter errors are input problems too.
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
