#include "ewn/water_energy.hpp"

#include <algorithm>

#include "ewn/log.hpp"

namespace ewn {

double fuel_rate(const DispatchableGenerator& g, double p, bool on) {
  const double cost = g.cost_quadratic * p * p + g.cost_linear * p + (on ? g.cost_fixed : 0.0);  // $/h
  const double denom = 60.0 * g.fuel_price * g.fuel_energy_density;
  if (denom == 0.0) {
    if (cost == 0.0) return 0.0;
    throw ParameterError("generator " + g.id + " has a cost curve but zero fuel price or energy density");
  }
  return cost / denom;
}

double co2_rate(double fuel, const DispatchableGenerator& g) { return fuel * g.fuel_energy_density * g.co2_per_mj; }

double thermal_loss(const DispatchableGenerator& g, double fuel, double p) {
  const double j = fuel * g.fuel_energy_density - 60.0 * p;
  if (j < 0.0) {
    warn("generator " + g.id + " converts more energy than its fuel holds; thermal loss clamped to 0");
    return 0.0;
  }
  return j;
}

CoolingFlows cooling_flows(const DispatchableGenerator& g, double j, const WaterParams& wp) {
  CoolingFlows f;
  if (g.cooling_kind == CoolingKind::dry || g.cooling_kind == CoolingKind::none) return f;
  f.thermal_load = j * (1.0 - g.eta_other);
  if (g.cooling_kind == CoolingKind::once_through) {
    f.withdrawal = f.thermal_load / (wp.c_p_water * wp.delta_t_cond);
    return f;
  }
  if (wp.n_cc <= 1.0) throw ParameterError("cycles of concentration must exceed 1");
  f.evaporation = f.thermal_load * (1.0 - wp.k_sens) / wp.h_fg;
  f.blowdown = f.evaporation / (wp.n_cc - 1.0);
  f.withdrawal = f.evaporation + f.blowdown;
  f.consumption = f.evaporation + (1.0 - wp.k_bd) * f.blowdown;
  return f;
}

ElectricFlows boundary_electric_flows(const MinuteRecord& r, const GridCase& c) {
  ElectricFlows e;
  for (std::size_t i = 0; i < c.var_resources.size(); ++i)
    if (c.var_resources[i].kind != VerKind::hydro_ror) e.renewable += r.ver_output[i];
  double demand = 0.0, ws = 0.0, ww = 0.0;
  for (std::size_t z = 0; z < c.load_zones.size(); ++z) {
    demand += r.load[z];
    ws += c.load_zones[z].water_supply_fraction * r.load[z];
    ww += c.load_zones[z].wastewater_fraction * r.load[z];
  }
  // Water-facility DR reduces the water-sector demand, split in proportion.
  double water_dr = 0.0, all_dr = 0.0;
  for (std::size_t m = 0; m < c.dr_units.size(); ++m) {
    all_dr += r.dr_power[m];
    if (c.dr_units[m].is_water_facility) water_dr += r.dr_power[m];
  }
  if (ws + ww > 0.0) {
    const double share = ws / (ws + ww);
    e.water_supply = std::max(0.0, ws - water_dr * share);
    e.wastewater = std::max(0.0, ww - water_dr * (1.0 - share));
  }
  e.end_use = demand - all_dr - e.water_supply - e.wastewater;
  return e;
}

EwnMinute account_minute(const MinuteRecord& r, const std::vector<bool>& gen_on, const GridCase& c) {
  EwnMinute m;
  m.minute = r.minute;
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const auto& g = c.generators[k];
    const double p = r.gen_power[k];
    const double fuel = fuel_rate(g, p, gen_on[k]);
    const double j = thermal_loss(g, fuel, p);
    const CoolingFlows cf = cooling_flows(g, j, c.config.water);
    m.fuel_kg.push_back(fuel);
    m.co2_kg.push_back(co2_rate(fuel, g));
    m.thermal_loss_mj.push_back(j);
    m.thermal_load_mj.push_back(cf.thermal_load);
    m.withdrawal_kg.push_back(cf.withdrawal);
    m.evaporation_kg.push_back(cf.evaporation);
    m.blowdown_kg.push_back(cf.blowdown);
    m.consumption_kg.push_back(cf.consumption);
  }
  m.electric = boundary_electric_flows(r, c);
  return m;
}

EwnLedger::EwnLedger(std::size_t n) {
  totals_.fuel_kg.assign(n, 0.0);
  totals_.co2_kg.assign(n, 0.0);
  totals_.withdrawal_kg.assign(n, 0.0);
  totals_.evaporation_kg.assign(n, 0.0);
  totals_.consumption_kg.assign(n, 0.0);
}

void EwnLedger::add(EwnMinute m) {
  if (m.fuel_kg.size() != totals_.fuel_kg.size()) throw DimensionError("ledger minute has the wrong generator count");
  for (std::size_t k = 0; k < m.fuel_kg.size(); ++k) {
    totals_.fuel_kg[k] += m.fuel_kg[k];
    totals_.co2_kg[k] += m.co2_kg[k];
    totals_.withdrawal_kg[k] += m.withdrawal_kg[k];
    totals_.evaporation_kg[k] += m.evaporation_kg[k];
    totals_.consumption_kg[k] += m.consumption_kg[k];
  }
  totals_.renewable_mwh += m.electric.renewable / 60.0;
  totals_.water_supply_mwh += m.electric.water_supply / 60.0;
  totals_.wastewater_mwh += m.electric.wastewater / 60.0;
  totals_.end_use_mwh += m.electric.end_use / 60.0;
  minutes_.push_back(std::move(m));
}

}  // namespace ewn
