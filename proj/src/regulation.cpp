#include "ewn/regulation.hpp"

#include <algorithm>
#include <cmath>

namespace ewn {

RegulationResponse apply_regulation(double imbalance, const std::vector<AgcState>& fleet, double capacity) {
  if (capacity < 0.0) throw ParameterError("regulation capacity must be nonnegative");
  RegulationResponse r;
  r.allocation.assign(fleet.size(), 0.0);
  const bool raise = imbalance < 0.0;  // shortfall calls for upward regulation
  double room = 0.0;
  for (const AgcState& a : fleet) room += std::max(0.0, raise ? a.headroom_up : a.headroom_dn);
  r.regulation = -std::clamp(imbalance, -capacity, capacity);
  r.residual = imbalance + r.regulation;
  const double carried = std::copysign(std::min(std::abs(r.regulation), room), r.regulation);
  double sum = 0.0;
  if (room > 0.0 && r.regulation != 0.0)
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      r.allocation[i] = carried * std::max(0.0, raise ? fleet[i].headroom_up : fleet[i].headroom_dn) / room;
      sum += r.allocation[i];
    }
  r.unassigned = r.regulation - sum;
  return r;
}

MinuteRecord step_minute(const GridCase& c, const DispatchSetpoints& sp, const MinuteActuals& act,
                         const MinuteContext& ctx) {
  if (act.ver.size() != c.var_resources.size() || act.load.size() != c.load_zones.size())
    throw DimensionError("minute actuals do not cover every VER and load zone");
  if (ctx.power_flow == nullptr) throw ParameterError("minute step needs a power flow");
  MinuteRecord rec;
  rec.minute = act.minute;
  std::vector<double> bus(c.buses.size(), 0.0);

  rec.gen_power = sp.gen_power;
  rec.dr_power = sp.dr_power;
  rec.storage_injection = sp.storage_injection;
  for (std::size_t m = 0; m < c.dr_units.size(); ++m) bus[c.dr_units[m].bus] += sp.dr_power[m];
  for (std::size_t s = 0; s < c.storage.size(); ++s) bus[c.storage[s].bus] += sp.storage_injection[s];
  for (std::size_t i = 0; i < c.var_resources.size(); ++i) {
    const auto& v = c.var_resources[i];
    const double out = act.ver[i] * (1.0 - sp.ver_curtailment[i] * v.curtailable_fraction);
    rec.ver_output.push_back(out);
    bus[v.bus] += out;
  }
  for (std::size_t z = 0; z < c.load_zones.size(); ++z) {
    const auto& lz = c.load_zones[z];
    const double d = act.load[z] * (1.0 - sp.load_curtailment[z] * lz.curtailable_fraction);
    rec.load.push_back(d);
    bus[lz.bus] -= d;
    rec.demand += d;
  }
  for (double p : sp.gen_power) rec.injection += p;
  for (double p : sp.dr_power) rec.injection += p;
  for (double p : sp.storage_injection) rec.injection += p;
  for (double p : rec.ver_output) rec.injection += p;
  rec.imbalance = rec.injection - rec.demand;

  std::vector<AgcState> fleet;
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const auto& g = c.generators[k];
    if (!g.agc_capable || !sp.gen_on[k]) continue;
    fleet.push_back({static_cast<int>(k), g.p_max - sp.gen_power[k], sp.gen_power[k] - g.p_min});
  }
  const RegulationResponse reg = apply_regulation(rec.imbalance, fleet, ctx.regulation_capacity);
  for (std::size_t a = 0; a < fleet.size(); ++a) rec.gen_power[fleet[a].generator] += reg.allocation[a];
  for (std::size_t k = 0; k < c.generators.size(); ++k) bus[c.generators[k].bus] += rec.gen_power[k];
  rec.regulation = reg.regulation;
  rec.regulation_unassigned = reg.unassigned;
  rec.slack = -reg.residual;

  const int slack_bus = ctx.power_flow->slack_bus();
  bus[slack_bus] += rec.slack + reg.unassigned;
  PowerFlowResult pf = ctx.power_flow->solve(bus);
  rec.angles = std::move(pf.angles);
  rec.flows = std::move(pf.flows);
  for (std::size_t l = 0; l < c.lines.size(); ++l)
    if (std::abs(rec.flows[l]) > c.lines[l].flow_limit + 1e-6) rec.flow_violations.push_back(c.lines[l].id);
  return rec;
}

}  // namespace ewn
