#pragma once

#include <string>
#include <vector>

#include "ewn/power_flow.hpp"
#include "ewn/sced.hpp"

namespace ewn {

/// One AGC-capable unit's room to move from its setpoint.
struct AgcState {
  int generator = -1;
  double headroom_up = 0.0;  // MW
  double headroom_dn = 0.0;  // MW
};

struct RegulationResponse {
  double regulation = 0.0;         // MW, opposite in sign to the imbalance
  double residual = 0.0;           // imbalance + regulation
  std::vector<double> allocation;  // per AgcState, each within its headroom
  double unassigned = 0.0;         // regulation - sum(allocation)
};

/// regulation = -clamp(imbalance, -capacity, +capacity). Units take shares
/// proportional to their headroom in the needed direction, never beyond it;
/// what the fleet cannot carry stays with the system reserve as
/// `unassigned`.
RegulationResponse apply_regulation(double imbalance, const std::vector<AgcState>& fleet, double capacity);

/// Minute-resolution actuals, case order.
struct MinuteActuals {
  int minute = 0;
  std::vector<double> ver;
  std::vector<double> load;
};

struct MinuteRecord {
  long minute = 0;
  std::vector<double> gen_power;   // setpoint plus regulation share
  std::vector<double> dr_power;
  std::vector<double> storage_injection;
  std::vector<double> ver_output;  // (1 - w d) * actual
  std::vector<double> load;        // actual * (1 - w_L d_L)
  std::vector<double> flows;       // MW
  std::vector<double> angles;      // rad
  double injection = 0.0;          // before regulation
  double demand = 0.0;
  double imbalance = 0.0;          // injection - demand
  double regulation = 0.0;
  double regulation_unassigned = 0.0;  // part of `regulation` carried by no unit, injected at the slack bus
  double slack = 0.0;              // reported imbalance
  std::vector<std::string> flow_violations;  // ids of lines above their limit
};

struct MinuteContext {
  const DcPowerFlow* power_flow = nullptr;
  double regulation_capacity = 0.0;
};

MinuteRecord step_minute(const GridCase& c, const DispatchSetpoints& setpoints, const MinuteActuals& actuals,
                         const MinuteContext& ctx);

}  // namespace ewn
