#pragma once

#include <vector>

#include "ewn/config.hpp"
#include "ewn/forecast.hpp"
#include "ewn/regulation.hpp"
#include "ewn/sced.hpp"
#include "ewn/scuc.hpp"
#include "ewn/water_energy.hpp"

namespace ewn {

/// The case after overrides and profile scaling, plus every forecast over
/// the simulated window.
struct ScenarioInputs {
  GridCase grid;
  int first_minute = 0;
  int minutes = 0;
  int periods_per_day = 24;
  int steps_per_period = 12;
  std::vector<ForecastSet> ver, load;  // actuals cover the window only
};

ScenarioInputs prepare_inputs(const ScenarioConfig& config);

struct DayResult {
  DayAheadSchedule schedule;
  std::vector<ReserveMargins> margins;
};

struct ScenarioResults {
  ScenarioConfig config;
  ScenarioInputs inputs;
  int slack_bus = 0;
  std::vector<DayResult> days;
  std::vector<DispatchSetpoints> steps;
  std::vector<MinuteRecord> minutes;
  EwnLedger ledger;
};

/// SCUC per day, SCED per step, regulation, power flow and accounting per
/// minute. Any layer failure is rethrown with the day, hour and step.
ScenarioResults run_scenario(const ScenarioConfig& config);

}  // namespace ewn
