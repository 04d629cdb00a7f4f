#pragma once

#include <vector>

#include "ewn/grid_model.hpp"
#include "ewn/regulation.hpp"

namespace ewn {

/// kg/min. Throws ParameterError when the fuel price or energy density is
/// zero while the cost curve is not.
double fuel_rate(const DispatchableGenerator& g, double p_mw, bool on);

/// kg/min of CO2 from `fuel_kg_min`.
double co2_rate(double fuel_kg_min, const DispatchableGenerator& g);

/// MJ/min, C D_f - 60 P clamped at zero with a warning.
double thermal_loss(const DispatchableGenerator& g, double fuel_kg_min, double p_mw);

struct CoolingFlows {
  double thermal_load = 0.0;  // Q_T, MJ/min
  double withdrawal = 0.0;    // kg/min
  double evaporation = 0.0;   // kg/min
  double blowdown = 0.0;      // kg/min
  double consumption = 0.0;   // kg/min, K
};

/// Throws ParameterError when n_cc <= 1 for a recirculating unit.
CoolingFlows cooling_flows(const DispatchableGenerator& g, double thermal_loss_mj_min, const WaterParams& wp);

struct ElectricFlows {
  double renewable = 0.0;     // D, MW
  double water_supply = 0.0;  // E
  double wastewater = 0.0;    // G
  double end_use = 0.0;       // H
};

/// D from wind and solar output; E and G from the zones' water fractions net
/// of water-facility DR output; H is the remaining net demand.
ElectricFlows boundary_electric_flows(const MinuteRecord& minute, const GridCase& c);

/// Boundary flows of one minute, per generator where applicable.
struct EwnMinute {
  long minute = 0;
  std::vector<double> fuel_kg, co2_kg, thermal_loss_mj, thermal_load_mj;
  std::vector<double> withdrawal_kg, evaporation_kg, blowdown_kg, consumption_kg;
  ElectricFlows electric;
};

EwnMinute account_minute(const MinuteRecord& minute, const std::vector<bool>& gen_on, const GridCase& c);

/// Totals over a run, kg and MWh.
struct EwnTotals {
  std::vector<double> fuel_kg, co2_kg, withdrawal_kg, evaporation_kg, consumption_kg;  // per generator
  double renewable_mwh = 0.0, water_supply_mwh = 0.0, wastewater_mwh = 0.0, end_use_mwh = 0.0;
};

class EwnLedger {
 public:
  explicit EwnLedger(std::size_t generators = 0);
  void add(EwnMinute m);
  const std::vector<EwnMinute>& minutes() const { return minutes_; }
  const EwnTotals& totals() const { return totals_; }

 private:
  std::vector<EwnMinute> minutes_;
  EwnTotals totals_;
};

}  // namespace ewn
