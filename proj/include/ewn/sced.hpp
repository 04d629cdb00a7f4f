#pragma once

#include <vector>

#include "ewn/grid_model.hpp"
#include "ewn/opt/solvers.hpp"
#include "ewn/scuc.hpp"

namespace ewn {

/// One 5-minute dispatch. Resource vectors follow case order.
struct DispatchSetpoints {
  long step = -1;  // global step index; -1 for a state built from initial conditions
  std::vector<bool> gen_on;
  std::vector<double> gen_power;
  std::vector<bool> dr_on;
  std::vector<double> dr_power;
  std::vector<double> storage_injection;  // P+ - P-, held from the SCUC hour
  std::vector<double> ver_available;      // real-time forecast
  std::vector<double> ver_curtailment;    // w
  std::vector<double> ver_delivered;      // (1 - w d) * available; empty when unknown
  std::vector<double> load_forecast;
  std::vector<double> load_curtailment;
  std::vector<double> penalty;  // per bus
  std::vector<double> flow;     // per line
  double objective = 0.0;       // $ for the step, already scaled by T_m/60
  double hourly_rate = 0.0;     // $/h expression before scaling

  /// Previous-step state at the start of a day-chained run.
  static DispatchSetpoints from_state(const GridCase& c, const ChainedState& s);
};

/// Real-time forecasts for one step.
struct ScedInput {
  long step = 0;
  int hour = 0;  // SCUC period containing the step
  std::vector<double> ver;
  std::vector<double> load;
};

struct ScedIndex {
  std::vector<int> gen_power, dr_power, ver_w, load_w, penalty, flow;  // -1 when absent
};

struct ScedModel {
  opt::MathProgram program;
  ScedIndex index;
  std::vector<bool> gen_on, dr_on;
  std::vector<double> storage_injection;
};

struct ScedOptions {
  opt::QpOptions qp;
};

/// `prev` supplies P0 for the ramp limits; a null pointer raises
/// ParameterError.
ScedModel build_sced_model(const GridCase& c, const DayAheadSchedule& schedule, const ScedInput& input,
                           const DispatchSetpoints* prev);

opt::MathProgram build_sced(const GridCase& c, const DayAheadSchedule& schedule, const ScedInput& input,
                            const DispatchSetpoints* prev);

/// Throws SolverError, with the program written to a dump file, if the QP
/// fails.
DispatchSetpoints run_sced(const GridCase& c, const DayAheadSchedule& schedule, const ScedInput& input,
                           const DispatchSetpoints* prev, const ScedOptions& options = {});

}  // namespace ewn
