#include "ewn/scuc.hpp"

#include <cmath>
#include <sstream>

namespace ewn {

using opt::MathProgram;
using opt::Relation;
using opt::Term;

ChainedState ChainedState::from_case(const GridCase& c) {
  ChainedState s;
  for (const auto& g : c.generators) {
    s.gen_on.push_back(g.initial_on);
    s.gen_power.push_back(g.initial_power);
  }
  for (const auto& d : c.dr_units) {
    s.dr_on.push_back(d.initial_on);
    s.dr_power.push_back(d.initial_power);
  }
  for (const auto& st : c.storage) {
    s.storage_energy.push_back(st.initial_energy);
    s.storage_discharging.push_back(st.initial_discharging);
    s.storage_charging.push_back(st.initial_charging);
  }
  return s;
}

Participation Participation::from(const GridCase& c, const FlexibilityFlags& flex) {
  Participation p;
  for (const auto& d : c.dr_units) p.dr_active.push_back(d.enabled && (!d.is_water_facility || flex.water_dr_enabled));
  for (const auto& v : c.var_resources)
    p.ver_curtailable.push_back(v.curtailment_enabled && v.curtailable_fraction > 0 &&
                                (v.kind != VerKind::hydro_ror || flex.hydro_curtailable));
  return p;
}

namespace {

std::string label(const std::string& kind, const std::string& id, int t) {
  return kind + "[" + id + "," + std::to_string(t) + "]";
}

void check_dims(const GridCase& c, const ScucForecast& f, const ChainedState& s, int periods) {
  if (periods < 1) throw DimensionError("SCUC needs at least one period");
  if (f.ver.size() != c.var_resources.size() || f.load.size() != c.load_zones.size())
    throw DimensionError("SCUC forecast does not cover every VER and load zone");
  for (const auto& v : f.ver)
    if (static_cast<int>(v.size()) != periods)
      throw DimensionError("VER forecast has " + std::to_string(v.size()) + " periods, expected " +
                           std::to_string(periods));
  for (const auto& v : f.load)
    if (static_cast<int>(v.size()) != periods)
      throw DimensionError("load forecast has " + std::to_string(v.size()) + " periods, expected " +
                           std::to_string(periods));
  if (s.gen_on.size() != c.generators.size() || s.gen_power.size() != c.generators.size() ||
      s.dr_on.size() != c.dr_units.size() || s.dr_power.size() != c.dr_units.size() ||
      s.storage_energy.size() != c.storage.size() || s.storage_discharging.size() != c.storage.size() ||
      s.storage_charging.size() != c.storage.size() ||
      (!s.ver_delivered.empty() && s.ver_delivered.size() != c.var_resources.size()))
    throw DimensionError("initial state does not match the case");
}

}  // namespace

ScucModel build_scuc_model(const GridCase& c, const ScucForecast& f, const FlexibilityFlags& flex,
                           const ChainedState& init, int T) {
  check_dims(c, f, init, T);
  ScucModel model;
  MathProgram& p = model.program;
  ScucIndex& ix = model.index;
  model.participation = Participation::from(c, flex);
  const Participation& part = model.participation;
  const SystemConfig& cfg = c.config;
  const double th = cfg.t_h;
  const double hmin = 60.0 * th;  // minutes per period; ramp limits are MW/min
  const double loss = 1.0 + cfg.gamma;
  const int NG = static_cast<int>(c.generators.size()), ND = static_cast<int>(c.dr_units.size());
  const int NS = static_cast<int>(c.storage.size()), NV = static_cast<int>(c.var_resources.size());
  const int NL = static_cast<int>(c.load_zones.size()), NB = static_cast<int>(c.buses.size());
  const int NLines = static_cast<int>(c.lines.size());
  auto grid = [T](int n) { return std::vector<std::vector<int>>(n, std::vector<int>(T, -1)); };
  ix.gen_on = grid(NG), ix.gen_startup = grid(NG), ix.gen_shutdown = grid(NG), ix.gen_power = grid(NG);
  ix.dr_on = grid(ND), ix.dr_startup = grid(ND), ix.dr_shutdown = grid(ND), ix.dr_power = grid(ND);
  ix.st_dis = grid(NS), ix.st_ch = grid(NS), ix.st_energy = grid(NS), ix.st_dis_on = grid(NS), ix.st_ch_on = grid(NS);
  ix.ver_w = grid(NV), ix.load_w = grid(NL), ix.penalty = grid(NB), ix.flow = grid(NLines);

  // Variables.
  for (int k = 0; k < NG; ++k) {
    const auto& g = c.generators[k];
    for (int t = 0; t < T; ++t) {
      const int w = ix.gen_on[k][t] = p.add_binary(label("w_G", g.id, t));
      const int u = ix.gen_startup[k][t] = p.add_binary(label("u_G", g.id, t));
      const int v = ix.gen_shutdown[k][t] = p.add_binary(label("v_G", g.id, t));
      const int pk = ix.gen_power[k][t] = p.add_variable(label("P_G", g.id, t), 0.0, g.p_max);
      p.variable(w).branch_priority = 2;
      p.add_linear(w, th * g.cost_fixed);
      p.add_linear(u, th * g.cost_startup);
      p.add_linear(v, th * g.cost_shutdown);
      p.add_linear(pk, th * g.cost_linear);
      p.add_quadratic(pk, th * g.cost_quadratic);
    }
  }
  for (int m = 0; m < ND; ++m) {
    if (!part.dr_active[m]) continue;
    const auto& d = c.dr_units[m];
    for (int t = 0; t < T; ++t) {
      const int w = ix.dr_on[m][t] = p.add_binary(label("w_D", d.id, t));
      const int u = ix.dr_startup[m][t] = p.add_binary(label("u_D", d.id, t));
      const int v = ix.dr_shutdown[m][t] = p.add_binary(label("v_D", d.id, t));
      const int pm = ix.dr_power[m][t] = p.add_variable(label("P_D", d.id, t), 0.0, d.p_max);
      p.variable(w).branch_priority = 1;
      p.add_linear(w, th * d.cost_fixed);
      p.add_linear(u, th * d.cost_startup);
      p.add_linear(v, th * d.cost_shutdown);
      p.add_linear(pm, th * d.cost_linear);
      p.add_quadratic(pm, th * d.cost_quadratic);
    }
  }
  for (int s = 0; s < NS; ++s) {
    const auto& st = c.storage[s];
    for (int t = 0; t < T; ++t) {
      const int dis = ix.st_dis[s][t] = p.add_variable(label("P+", st.id, t), 0.0, st.discharge_max);
      const int ch = ix.st_ch[s][t] = p.add_variable(label("P-", st.id, t), 0.0, st.charge_max);
      const int e = ix.st_energy[s][t] = p.add_variable(label("E", st.id, t), st.energy_min, st.energy_max);
      ix.st_dis_on[s][t] = p.add_binary(label("w_P", st.id, t));
      ix.st_ch_on[s][t] = p.add_binary(label("w_S", st.id, t));
      p.variable(ix.st_dis_on[s][t]).branch_priority = 1;
      p.variable(ix.st_ch_on[s][t]).branch_priority = 1;
      p.add_linear(e, th * st.cost_energy);
      p.add_linear(dis, th * st.cost_discharge);
      p.add_linear(ch, th * st.cost_charge);
    }
  }
  for (int i = 0; i < NV; ++i) {
    const auto& v = c.var_resources[i];
    for (int t = 0; t < T; ++t) {
      const double avail = f.ver[i][t];
      p.add_constant(th * v.curtailment_cost * avail);
      if (!part.ver_curtailable[i]) continue;
      const int w = ix.ver_w[i][t] = p.add_variable(label("w_V", v.id, t), 0.0, 1.0);
      p.add_linear(w, -th * v.curtailment_cost * v.curtailable_fraction * avail);
    }
  }
  for (int z = 0; z < NL; ++z) {
    const auto& lz = c.load_zones[z];
    for (int t = 0; t < T; ++t) {
      const double dem = f.load[z][t];
      p.add_constant(th * lz.curtailment_cost * dem);
      if (lz.curtailable_fraction <= 0) continue;
      const int w = ix.load_w[z][t] = p.add_variable(label("w_L", lz.id, t), 0.0, 1.0);
      p.add_linear(w, -th * lz.curtailment_cost * lz.curtailable_fraction * dem);
    }
  }
  for (int n = 0; n < NB; ++n)
    for (int t = 0; t < T; ++t) {
      const int x = ix.penalty[n][t] =
          p.add_variable(label("P_x", std::to_string(c.buses[n].external_id), t), -cfg.penalty_bound, cfg.penalty_bound);
      p.add_quadratic(x, th * cfg.penalty_cost);
      p.variable(x).segments = 2;  // breakpoint at zero
    }
  for (int l = 0; l < NLines; ++l)
    for (int t = 0; t < T; ++t) {
      const auto& ln = c.lines[l];
      ix.flow[l][t] = p.add_variable(label("F", ln.id, t), -ln.flow_limit, ln.flow_limit);
    }

  // Delivered VER output of the previous period as (constant, terms).
  auto delivered = [&](int i, int t, std::vector<Term>& terms, double sign) {
    const double avail = f.ver[i][t];
    if (ix.ver_w[i][t] >= 0) terms.push_back({ix.ver_w[i][t], -sign * avail * c.var_resources[i].curtailable_fraction});
    return sign * avail;
  };

  for (int t = 0; t < T; ++t) {
    // Nodal balance: injections + penalty - sum_l B_nl F_l = 0.
    std::vector<std::vector<Term>> bal(NB);
    std::vector<double> rhs(NB, 0.0);
    for (int k = 0; k < NG; ++k) bal[c.generators[k].bus].push_back({ix.gen_power[k][t], 1.0});
    for (int m = 0; m < ND; ++m)
      if (part.dr_active[m]) bal[c.dr_units[m].bus].push_back({ix.dr_power[m][t], 1.0});
    for (int s = 0; s < NS; ++s) {
      bal[c.storage[s].bus].push_back({ix.st_dis[s][t], 1.0});
      bal[c.storage[s].bus].push_back({ix.st_ch[s][t], -1.0});
    }
    for (int i = 0; i < NV; ++i) {
      const auto& v = c.var_resources[i];
      rhs[v.bus] -= loss * f.ver[i][t];
      if (ix.ver_w[i][t] >= 0) bal[v.bus].push_back({ix.ver_w[i][t], -loss * f.ver[i][t] * v.curtailable_fraction});
    }
    for (int z = 0; z < NL; ++z) {
      const auto& lz = c.load_zones[z];
      rhs[lz.bus] += loss * f.load[z][t];
      if (ix.load_w[z][t] >= 0) bal[lz.bus].push_back({ix.load_w[z][t], loss * f.load[z][t] * lz.curtailable_fraction});
    }
    for (int n = 0; n < NB; ++n) bal[n].push_back({ix.penalty[n][t], 1.0});
    for (int l = 0; l < NLines; ++l) {
      bal[c.lines[l].from_bus].push_back({ix.flow[l][t], -1.0});
      bal[c.lines[l].to_bus].push_back({ix.flow[l][t], 1.0});
    }
    for (int n = 0; n < NB; ++n) p.add_constraint("balance", t, std::move(bal[n]), Relation::equal, rhs[n]);

    // Capacity, logic and ramping of generators.
    for (int k = 0; k < NG; ++k) {
      const auto& g = c.generators[k];
      const int w = ix.gen_on[k][t], u = ix.gen_startup[k][t], v = ix.gen_shutdown[k][t], pk = ix.gen_power[k][t];
      p.add_constraint("gen_max", t, {{pk, 1.0}, {w, -g.p_max}}, Relation::less_equal, 0.0);
      p.add_constraint("gen_min", t, {{pk, 1.0}, {w, -g.p_min}}, Relation::greater_equal, 0.0);
      if (t == 0) {
        const double w0 = init.gen_on[k] ? 1.0 : 0.0;
        p.add_constraint("gen_logic", t, {{w, 1.0}, {u, -1.0}, {v, 1.0}}, Relation::equal, w0);
      } else {
        p.add_constraint("gen_logic", t, {{w, 1.0}, {ix.gen_on[k][t - 1], -1.0}, {u, -1.0}, {v, 1.0}},
                         Relation::equal, 0.0);
      }
      p.add_constraint("gen_switch", t, {{u, 1.0}, {v, 1.0}}, Relation::less_equal, 1.0);
      std::vector<Term> dn{{pk, 1.0}, {v, g.p_max}}, up{{pk, 1.0}, {u, -g.p_max}};
      double prev = 0.0;
      if (t == 0) prev = init.gen_power[k];
      else {
        dn.push_back({ix.gen_power[k][t - 1], -1.0});
        up.push_back({ix.gen_power[k][t - 1], -1.0});
      }
      p.add_constraint("gen_ramp_dn", t, std::move(dn), Relation::greater_equal, hmin * g.ramp_dn + prev);
      p.add_constraint("gen_ramp_up", t, std::move(up), Relation::less_equal, hmin * g.ramp_up + prev);
    }
    for (int m = 0; m < ND; ++m) {
      if (!part.dr_active[m]) continue;
      const auto& d = c.dr_units[m];
      const int w = ix.dr_on[m][t], u = ix.dr_startup[m][t], v = ix.dr_shutdown[m][t], pm = ix.dr_power[m][t];
      p.add_constraint("dr_max", t, {{pm, 1.0}, {w, -d.p_max}}, Relation::less_equal, 0.0);
      p.add_constraint("dr_min", t, {{pm, 1.0}, {w, -d.p_min}}, Relation::greater_equal, 0.0);
      if (t == 0) {
        const double w0 = init.dr_on[m] ? 1.0 : 0.0;
        p.add_constraint("dr_logic", t, {{w, 1.0}, {u, -1.0}, {v, 1.0}}, Relation::equal, w0);
      } else {
        p.add_constraint("dr_logic", t, {{w, 1.0}, {ix.dr_on[m][t - 1], -1.0}, {u, -1.0}, {v, 1.0}},
                         Relation::equal, 0.0);
      }
      p.add_constraint("dr_switch", t, {{u, 1.0}, {v, 1.0}}, Relation::less_equal, 1.0);
      std::vector<Term> dn{{pm, 1.0}, {v, d.p_max}}, up{{pm, 1.0}, {u, -d.p_max}};
      double prev = 0.0;
      if (t == 0) prev = init.dr_power[m];
      else {
        dn.push_back({ix.dr_power[m][t - 1], -1.0});
        up.push_back({ix.dr_power[m][t - 1], -1.0});
      }
      p.add_constraint("dr_ramp_dn", t, std::move(dn), Relation::greater_equal, hmin * d.ramp_dn + prev);
      p.add_constraint("dr_ramp_up", t, std::move(up), Relation::less_equal, hmin * d.ramp_up + prev);
    }

    // Storage.
    for (int s = 0; s < NS; ++s) {
      const auto& st = c.storage[s];
      const int dis = ix.st_dis[s][t], ch = ix.st_ch[s][t], e = ix.st_energy[s][t];
      const int wp = ix.st_dis_on[s][t], ws = ix.st_ch_on[s][t];
      p.add_constraint("storage_dis_max", t, {{dis, 1.0}, {wp, -st.discharge_max}}, Relation::less_equal, 0.0);
      p.add_constraint("storage_dis_min", t, {{dis, 1.0}, {wp, -st.discharge_min}}, Relation::greater_equal, 0.0);
      p.add_constraint("storage_ch_max", t, {{ch, 1.0}, {ws, -st.charge_max}}, Relation::less_equal, 0.0);
      p.add_constraint("storage_ch_min", t, {{ch, 1.0}, {ws, -st.charge_min}}, Relation::greater_equal, 0.0);
      std::vector<Term> state{{e, 1.0}, {ch, -st.efficiency * th}, {dis, th}};
      double e_prev = 0.0;
      if (t == 0) e_prev = init.storage_energy[s];
      else state.push_back({ix.st_energy[s][t - 1], -1.0});
      p.add_constraint("storage_state", t, std::move(state), Relation::equal, e_prev);
      p.add_constraint("storage_mode", t, {{wp, 1.0}, {ws, 1.0}}, Relation::less_equal, 1.0);
      if (t == 0) {
        p.add_constraint("storage_mode_prev", t, {{ws, 1.0}}, Relation::less_equal,
                         init.storage_discharging[s] ? 0.0 : 1.0);
        p.add_constraint("storage_mode_next", t, {{wp, 1.0}}, Relation::less_equal,
                         init.storage_charging[s] ? 0.0 : 1.0);
      } else {
        p.add_constraint("storage_mode_prev", t, {{ix.st_dis_on[s][t - 1], 1.0}, {ws, 1.0}}, Relation::less_equal,
                         1.0);
        p.add_constraint("storage_mode_next", t, {{wp, 1.0}, {ix.st_ch_on[s][t - 1], 1.0}}, Relation::less_equal,
                         1.0);
      }
    }

    // VER ramping; rows without a curtailment variable hold constants only.
    for (int i = 0; i < NV; ++i) {
      if (!part.ver_curtailable[i]) continue;
      if (t == 0 && init.ver_delivered.empty()) continue;
      const auto& v = c.var_resources[i];
      std::vector<Term> terms;
      double k = delivered(i, t, terms, 1.0);
      if (t == 0) k -= init.ver_delivered[i];
      else k += delivered(i, t - 1, terms, -1.0);
      p.add_constraint("ver_ramp_dn", t, terms, Relation::greater_equal, hmin * v.ramp_dn - k);
      p.add_constraint("ver_ramp_up", t, terms, Relation::less_equal, hmin * v.ramp_up - k);
    }

    // Load-following reserves.
    {
      std::vector<Term> up, dn;
      double up_k = 0.0, dn_k = 0.0;
      for (int k = 0; k < NG; ++k) {
        const auto& g = c.generators[k];
        up.push_back({ix.gen_on[k][t], g.p_max});
        up.push_back({ix.gen_power[k][t], -1.0});
        dn.push_back({ix.gen_power[k][t], 1.0});
        dn.push_back({ix.gen_on[k][t], -g.p_min});
      }
      for (int i = 0; i < NV; ++i) {
        if (ix.ver_w[i][t] < 0) continue;
        const double share = f.ver[i][t] * c.var_resources[i].curtailable_fraction;
        up.push_back({ix.ver_w[i][t], share});
        dn.push_back({ix.ver_w[i][t], -share});
        dn_k += share;
      }
      p.add_constraint("lfr_up", t, up, Relation::greater_equal, cfg.p_res - up_k);
      p.add_constraint("lfr_dn", t, dn, Relation::greater_equal, cfg.p_res - dn_k);
    }

    // Ramping reserves, with R_t = (P_t - P_{t-1}) / (60 T_h).
    {
      std::vector<Term> up, dn;
      double up_k = 0.0, dn_k = 0.0;
      auto ramp_use = [&](int cur, int prev_var, double prev_const) {
        // Adds R_t to dn and -R_t to up.
        up.push_back({cur, -1.0 / hmin});
        dn.push_back({cur, 1.0 / hmin});
        if (prev_var >= 0) {
          up.push_back({prev_var, 1.0 / hmin});
          dn.push_back({prev_var, -1.0 / hmin});
        } else {
          up_k += prev_const / hmin;
          dn_k -= prev_const / hmin;
        }
      };
      for (int k = 0; k < NG; ++k) {
        const auto& g = c.generators[k];
        up.push_back({ix.gen_on[k][t], g.ramp_up});
        dn.push_back({ix.gen_on[k][t], -g.ramp_dn});
        ramp_use(ix.gen_power[k][t], t > 0 ? ix.gen_power[k][t - 1] : -1, t > 0 ? 0.0 : init.gen_power[k]);
      }
      for (int m = 0; m < ND; ++m) {
        if (!part.dr_active[m]) continue;
        const auto& d = c.dr_units[m];
        up.push_back({ix.dr_on[m][t], d.ramp_up});
        dn.push_back({ix.dr_on[m][t], -d.ramp_dn});
        ramp_use(ix.dr_power[m][t], t > 0 ? ix.dr_power[m][t - 1] : -1, t > 0 ? 0.0 : init.dr_power[m]);
      }
      for (int i = 0; i < NV; ++i) {
        if (!part.ver_curtailable[i]) continue;
        const auto& v = c.var_resources[i];
        const int w = ix.ver_w[i][t];
        up.push_back({w, v.ramp_up});
        dn.push_back({w, -v.ramp_dn});
        if (t == 0 && init.ver_delivered.empty()) continue;
        std::vector<Term> terms;
        double k = delivered(i, t, terms, 1.0);
        if (t == 0) k -= init.ver_delivered[i];
        else k += delivered(i, t - 1, terms, -1.0);
        for (const Term& tm : terms) {
          up.push_back({tm.var, -tm.coef / hmin});
          dn.push_back({tm.var, tm.coef / hmin});
        }
        up_k -= k / hmin;
        dn_k += k / hmin;
      }
      p.add_constraint("ramp_up", t, up, Relation::greater_equal, cfg.r_res - up_k);
      p.add_constraint("ramp_dn", t, dn, Relation::greater_equal, cfg.r_res - dn_k);
    }
  }
  return model;
}

MathProgram build_scuc(const GridCase& c, const ScucForecast& f, const FlexibilityFlags& flex,
                       const ChainedState& init, int periods) {
  return build_scuc_model(c, f, flex, init, periods).program;
}

DayAheadSchedule extract_schedule(const GridCase& c, const ScucModel& model, const ScucForecast& f,
                                  const ChainedState& init, const std::vector<double>& x) {
  const ScucIndex& ix = model.index;
  DayAheadSchedule s;
  s.periods = static_cast<int>(f.load.empty() ? (f.ver.empty() ? 0 : f.ver[0].size()) : f.load[0].size());
  if (!ix.penalty.empty()) s.periods = static_cast<int>(ix.penalty[0].size());
  s.t_h = c.config.t_h;
  s.participation = model.participation;
  s.initial = init;
  auto take = [&](const std::vector<std::vector<int>>& idx) {
    Grid2 out(idx.size(), std::vector<double>(s.periods, 0.0));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (int t = 0; t < s.periods; ++t)
        if (idx[r][t] >= 0) out[r][t] = x[idx[r][t]];
    return out;
  };
  s.gen_on = take(ix.gen_on);
  s.gen_startup = take(ix.gen_startup);
  s.gen_shutdown = take(ix.gen_shutdown);
  s.gen_power = take(ix.gen_power);
  s.dr_on = take(ix.dr_on);
  s.dr_startup = take(ix.dr_startup);
  s.dr_shutdown = take(ix.dr_shutdown);
  s.dr_power = take(ix.dr_power);
  s.storage_discharge = take(ix.st_dis);
  s.storage_charge = take(ix.st_ch);
  s.storage_energy = take(ix.st_energy);
  s.storage_discharging = take(ix.st_dis_on);
  s.storage_charging = take(ix.st_ch_on);
  s.ver_curtailment = take(ix.ver_w);
  s.load_curtailment = take(ix.load_w);
  s.penalty = take(ix.penalty);
  s.flow = take(ix.flow);
  s.ver_forecast = f.ver;
  s.load_forecast = f.load;
  s.ver_delivered = f.ver;
  for (std::size_t i = 0; i < f.ver.size(); ++i)
    for (int t = 0; t < s.periods; ++t)
      s.ver_delivered[i][t] *= 1.0 - s.ver_curtailment[i][t] * c.var_resources[i].curtailable_fraction;
  return s;
}

ChainedState DayAheadSchedule::final_state() const {
  ChainedState st;
  const int t = periods - 1;
  for (std::size_t k = 0; k < gen_on.size(); ++k) {
    st.gen_on.push_back(gen_on[k][t] > 0.5);
    st.gen_power.push_back(gen_power[k][t]);
  }
  for (std::size_t m = 0; m < dr_on.size(); ++m) {
    st.dr_on.push_back(dr_on[m][t] > 0.5);
    st.dr_power.push_back(dr_power[m][t]);
  }
  for (std::size_t s = 0; s < storage_energy.size(); ++s) {
    st.storage_energy.push_back(storage_energy[s][t]);
    st.storage_discharging.push_back(storage_discharging[s][t] > 0.5);
    st.storage_charging.push_back(storage_charging[s][t] > 0.5);
  }
  for (const auto& v : ver_delivered) st.ver_delivered.push_back(v[t]);
  return st;
}

}  // namespace ewn

namespace ewn {
namespace {

// Minimizes total row violation of the continuous relaxation.
std::vector<InfeasibleRow> elastic_report(const MathProgram& program) {
  MathProgram e;
  for (const auto& v0 : program.variables()) {
    opt::Variable v = v0;
    v.kind = opt::VarKind::continuous;
    v.linear = v.quadratic = 0.0;
    v.segments = 0;
    const int j = e.add_variable(v.name, v.lower, v.upper);
    e.variable(j) = v;
  }
  std::vector<std::pair<int, int>> slack(program.num_constraints(), {-1, -1});
  for (int i = 0; i < program.num_constraints(); ++i) {
    const auto& row = program.constraint(i);
    std::vector<Term> terms = row.terms;
    double scale = 1.0;
    for (const Term& t : terms) scale = std::max(scale, std::abs(t.coef));
    if (row.relation != Relation::less_equal) {
      slack[i].first = e.add_variable("s+", 0.0, opt::kInfinity);
      e.add_linear(slack[i].first, 1.0 / scale);
      terms.push_back({slack[i].first, 1.0});
    }
    if (row.relation != Relation::greater_equal) {
      slack[i].second = e.add_variable("s-", 0.0, opt::kInfinity);
      e.add_linear(slack[i].second, 1.0 / scale);
      terms.push_back({slack[i].second, -1.0});
    }
    e.add_constraint(row.family, row.period, std::move(terms), row.relation, row.rhs);
  }
  const opt::Solution s = opt::solve_lp(e);
  std::vector<InfeasibleRow> out;
  if (s.status != opt::SolveStatus::optimal) return out;
  for (int i = 0; i < program.num_constraints(); ++i) {
    double viol = 0.0;
    if (slack[i].first >= 0) viol += s.values[slack[i].first];
    if (slack[i].second >= 0) viol += s.values[slack[i].second];
    if (viol > 1e-6) out.push_back({program.constraint(i).family, program.constraint(i).period, viol});
  }
  return out;
}

}  // namespace

DayAheadSchedule run_scuc(const GridCase& c, const ScucForecast& f, const FlexibilityFlags& flex,
                          const ChainedState& init, const ScucOptions& options) {
  const ScucModel model = build_scuc_model(c, f, flex, init, options.periods);
  const opt::Solution sol = opt::solve_miqp(model.program, options.mip);
  if (sol.status == opt::SolveStatus::unbounded) throw SolverError("SCUC relaxation is unbounded");
  if (!sol.ok()) {
    std::vector<InfeasibleRow> rows = elastic_report(model.program);
    std::ostringstream msg;
    msg << "SCUC infeasible";
    if (rows.empty()) msg << ": no commitment pattern is feasible although the relaxation is";
    for (std::size_t r = 0; r < rows.size() && r < 10; ++r)
      msg << (r ? "; " : ": ") << rows[r].family << " at hour " << rows[r].period << " short by " << rows[r].violation;
    throw InfeasibleScheduleError(msg.str(), std::move(rows));
  }
  DayAheadSchedule s = extract_schedule(c, model, f, init, sol.values);
  s.objective = sol.objective;
  s.mip_gap = sol.mip_gap;
  s.nodes = sol.nodes;
  s.wall_time = sol.wall_time;
  s.status = sol.status;
  return s;
}

std::vector<ReserveMargins> compute_reserve_margins(const DayAheadSchedule& s, const GridCase& c) {
  std::vector<ReserveMargins> out(s.periods);
  const double hmin = 60.0 * s.t_h;
  for (int t = 0; t < s.periods; ++t) {
    ReserveMargins& r = out[t];
    for (std::size_t k = 0; k < c.generators.size(); ++k) {
      const auto& g = c.generators[k];
      const double w = s.gen_on[k][t], p = s.gen_power[k][t];
      const double prev = t > 0 ? s.gen_power[k][t - 1] : s.initial.gen_power[k];
      const double ramp = (p - prev) / hmin;
      r.lfr_up += w * g.p_max - p;
      r.lfr_dn += p - w * g.p_min;
      r.ramp_up += w * g.ramp_up - ramp;
      r.ramp_dn += ramp - w * g.ramp_dn;
    }
    for (std::size_t m = 0; m < c.dr_units.size(); ++m) {
      if (!s.participation.dr_active[m]) continue;
      const auto& d = c.dr_units[m];
      const double w = s.dr_on[m][t], p = s.dr_power[m][t];
      const double prev = t > 0 ? s.dr_power[m][t - 1] : s.initial.dr_power[m];
      const double ramp = (p - prev) / hmin;
      r.ramp_up += w * d.ramp_up - ramp;
      r.ramp_dn += ramp - w * d.ramp_dn;
    }
    for (std::size_t i = 0; i < c.var_resources.size(); ++i) {
      if (!s.participation.ver_curtailable[i]) continue;
      const auto& v = c.var_resources[i];
      const double w = s.ver_curtailment[i][t];
      const double share = s.ver_forecast[i][t] * v.curtailable_fraction;
      r.lfr_up += share * w;
      r.lfr_dn += share * (1.0 - w);
      r.ramp_up += w * v.ramp_up;
      r.ramp_dn -= w * v.ramp_dn;
      const bool has_prev = t > 0 || !s.initial.ver_delivered.empty();
      if (!has_prev) continue;
      const double prev = t > 0 ? s.ver_delivered[i][t - 1] : s.initial.ver_delivered[i];
      const double ramp = (s.ver_delivered[i][t] - prev) / hmin;
      r.ramp_up -= ramp;
      r.ramp_dn += ramp;
    }
  }
  return out;
}

}  // namespace ewn
