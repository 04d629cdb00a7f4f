#include "ewn/sced.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>

namespace ewn {

using opt::MathProgram;
using opt::Relation;
using opt::Term;

DispatchSetpoints DispatchSetpoints::from_state(const GridCase& c, const ChainedState& s) {
  DispatchSetpoints d;
  d.gen_on = s.gen_on;
  d.gen_power = s.gen_power;
  d.dr_on = s.dr_on;
  d.dr_power = s.dr_power;
  d.storage_injection.assign(c.storage.size(), 0.0);
  d.ver_delivered = s.ver_delivered;
  d.ver_available.assign(c.var_resources.size(), 0.0);
  d.ver_curtailment.assign(c.var_resources.size(), 0.0);
  d.load_forecast.assign(c.load_zones.size(), 0.0);
  d.load_curtailment.assign(c.load_zones.size(), 0.0);
  d.penalty.assign(c.buses.size(), 0.0);
  d.flow.assign(c.lines.size(), 0.0);
  return d;
}

namespace {

// Interval [lo, hi] intersected with [a, b]; an empty result collapses to
// the endpoint of [a, b] nearest the interval.
std::pair<double, double> intersect(double lo, double hi, double a, double b) {
  const double l = std::max(lo, a), h = std::min(hi, b);
  if (l <= h) return {l, h};
  const double v = hi < a ? a : b;
  return {v, v};
}

}  // namespace

ScedModel build_sced_model(const GridCase& c, const DayAheadSchedule& sch, const ScedInput& in,
                           const DispatchSetpoints* prev) {
  if (prev == nullptr) throw ParameterError("SCED step " + std::to_string(in.step) + " has no previous setpoints");
  if (in.hour < 0 || in.hour >= sch.periods)
    throw DimensionError("SCED hour " + std::to_string(in.hour) + " outside the day-ahead schedule");
  if (in.ver.size() != c.var_resources.size() || in.load.size() != c.load_zones.size())
    throw DimensionError("SCED forecast does not cover every VER and load zone");
  if (prev->gen_power.size() != c.generators.size() || prev->dr_power.size() != c.dr_units.size() ||
      prev->gen_on.size() != c.generators.size() || prev->dr_on.size() != c.dr_units.size())
    throw DimensionError("previous setpoints do not match the case");

  const SystemConfig& cfg = c.config;
  const double tm = cfg.t_m;
  const double scale = tm / 60.0;
  const double loss = 1.0 + cfg.gamma;
  const int t = in.hour;
  const int NB = static_cast<int>(c.buses.size());

  ScedModel model;
  MathProgram& p = model.program;
  ScedIndex& ix = model.index;
  ix.gen_power.assign(c.generators.size(), -1);
  ix.dr_power.assign(c.dr_units.size(), -1);
  ix.ver_w.assign(c.var_resources.size(), -1);
  ix.load_w.assign(c.load_zones.size(), -1);
  ix.penalty.assign(NB, -1);
  ix.flow.assign(c.lines.size(), -1);

  std::vector<std::vector<Term>> bal(NB);
  std::vector<double> rhs(NB, 0.0);

  // Units committed in both steps ramp from P0; a unit just started may sit
  // anywhere in [P_min, P_max].
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const auto& g = c.generators[k];
    const bool on = sch.gen_on[k][t] > 0.5;
    model.gen_on.push_back(on);
    if (!on) continue;
    double lo = g.p_min, hi = g.p_max;
    if (prev->gen_on[k]) std::tie(lo, hi) = intersect(prev->gen_power[k] + tm * g.ramp_dn,
                                                      prev->gen_power[k] + tm * g.ramp_up, g.p_min, g.p_max);
    const int j = ix.gen_power[k] = p.add_variable("P_G[" + g.id + "]", lo, hi);
    p.add_linear(j, scale * g.cost_linear);
    p.add_quadratic(j, scale * g.cost_quadratic);
    bal[g.bus].push_back({j, 1.0});
  }
  for (std::size_t m = 0; m < c.dr_units.size(); ++m) {
    const auto& d = c.dr_units[m];
    const bool on = sch.participation.dr_active[m] && sch.dr_on[m][t] > 0.5;
    model.dr_on.push_back(on);
    if (!on) continue;
    double lo = d.p_min, hi = d.p_max;
    if (prev->dr_on[m]) std::tie(lo, hi) = intersect(prev->dr_power[m] + tm * d.ramp_dn,
                                                     prev->dr_power[m] + tm * d.ramp_up, d.p_min, d.p_max);
    const int j = ix.dr_power[m] = p.add_variable("P_D[" + d.id + "]", lo, hi);
    p.add_linear(j, scale * d.cost_linear);
    p.add_quadratic(j, scale * d.cost_quadratic);
    bal[d.bus].push_back({j, 1.0});
  }
  for (std::size_t s = 0; s < c.storage.size(); ++s) {
    const auto& st = c.storage[s];
    const double dis = sch.storage_discharge[s][t], ch = sch.storage_charge[s][t];
    model.storage_injection.push_back(dis - ch);
    rhs[st.bus] -= dis - ch;
    p.add_constant(scale * (st.cost_discharge * dis - st.cost_charge * ch));
  }
  const bool have_prev_ver = prev->ver_delivered.size() == c.var_resources.size();
  for (std::size_t i = 0; i < c.var_resources.size(); ++i) {
    const auto& v = c.var_resources[i];
    const double avail = in.ver[i];
    p.add_constant(scale * v.curtailment_cost * avail);
    rhs[v.bus] -= loss * avail;
    const double share = avail * v.curtailable_fraction;
    if (!sch.participation.ver_curtailable[i] || share <= 0.0) continue;
    // Delivered output avail - share * w must stay within the ramp window.
    double lo = 0.0, hi = 1.0;
    if (have_prev_ver) {
      const double p0 = prev->ver_delivered[i];
      std::tie(lo, hi) = intersect((avail - (p0 + tm * v.ramp_up)) / share, (avail - (p0 + tm * v.ramp_dn)) / share,
                                   0.0, 1.0);
    }
    const int j = ix.ver_w[i] = p.add_variable("w_V[" + v.id + "]", lo, hi);
    p.add_linear(j, -scale * v.curtailment_cost * share);
    bal[v.bus].push_back({j, -loss * share});
  }
  for (std::size_t z = 0; z < c.load_zones.size(); ++z) {
    const auto& lz = c.load_zones[z];
    const double dem = in.load[z];
    p.add_constant(scale * lz.curtailment_cost * dem);
    rhs[lz.bus] += loss * dem;
    if (lz.curtailable_fraction <= 0.0) continue;
    const int j = ix.load_w[z] = p.add_variable("w_L[" + lz.id + "]", 0.0, 1.0);
    p.add_linear(j, -scale * lz.curtailment_cost * lz.curtailable_fraction * dem);
    bal[lz.bus].push_back({j, loss * lz.curtailable_fraction * dem});
  }
  for (int n = 0; n < NB; ++n) {
    const int j = ix.penalty[n] =
        p.add_variable("P_x[" + std::to_string(c.buses[n].external_id) + "]", -cfg.penalty_bound, cfg.penalty_bound);
    p.add_quadratic(j, scale * cfg.penalty_cost);
    bal[n].push_back({j, 1.0});
  }
  for (std::size_t l = 0; l < c.lines.size(); ++l) {
    const auto& ln = c.lines[l];
    const int j = ix.flow[l] = p.add_variable("F[" + ln.id + "]", -ln.flow_limit, ln.flow_limit);
    bal[ln.from_bus].push_back({j, -1.0});
    bal[ln.to_bus].push_back({j, 1.0});
  }
  for (int n = 0; n < NB; ++n) p.add_constraint("balance", -1, std::move(bal[n]), Relation::equal, rhs[n]);
  return model;
}

MathProgram build_sced(const GridCase& c, const DayAheadSchedule& schedule, const ScedInput& input,
                       const DispatchSetpoints* prev) {
  return build_sced_model(c, schedule, input, prev).program;
}

DispatchSetpoints run_sced(const GridCase& c, const DayAheadSchedule& schedule, const ScedInput& input,
                           const DispatchSetpoints* prev, const ScedOptions& options) {
  const ScedModel model = build_sced_model(c, schedule, input, prev);
  opt::Solution sol;
  std::string reason;
  try {
    sol = opt::solve_qp(model.program, options.qp);
    if (!sol.ok()) reason = opt::to_string(sol.status);
  } catch (const SolverError& e) {
    reason = e.what();
  }
  if (!reason.empty()) {
    const auto dump = std::filesystem::temp_directory_path() / ("ewn_sced_step_" + std::to_string(input.step) + ".txt");
    std::ofstream out(dump);
    model.program.write_text(out);
    throw SolverError("SCED step " + std::to_string(input.step) + " failed (" + reason + "); program written to " +
                      dump.string());
  }

  const ScedIndex& ix = model.index;
  const auto& x = sol.values;
  auto value = [&](int j) { return j >= 0 ? x[j] : 0.0; };
  DispatchSetpoints d;
  d.step = input.step;
  d.gen_on = model.gen_on;
  d.dr_on = model.dr_on;
  for (int j : ix.gen_power) d.gen_power.push_back(value(j));
  for (int j : ix.dr_power) d.dr_power.push_back(value(j));
  d.storage_injection = model.storage_injection;
  d.ver_available = input.ver;
  for (std::size_t i = 0; i < c.var_resources.size(); ++i) {
    const double w = value(ix.ver_w[i]);
    d.ver_curtailment.push_back(w);
    d.ver_delivered.push_back(input.ver[i] * (1.0 - w * c.var_resources[i].curtailable_fraction));
  }
  d.load_forecast = input.load;
  for (int j : ix.load_w) d.load_curtailment.push_back(value(j));
  for (int j : ix.penalty) d.penalty.push_back(value(j));
  for (int j : ix.flow) d.flow.push_back(value(j));
  d.objective = sol.objective;
  d.hourly_rate = sol.objective * 60.0 / c.config.t_m;
  return d;
}

}  // namespace ewn
