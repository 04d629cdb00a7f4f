#include "ewn/scenario.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ewn/log.hpp"

namespace ewn {
namespace {

const ClassForecast& class_of(const ScenarioConfig& cfg, VerKind k) {
  switch (k) {
    case VerKind::wind: return cfg.wind;
    case VerKind::solar: return cfg.solar;
    case VerKind::hydro_ror: return cfg.hydro;
  }
  return cfg.wind;
}

Series window(const Series& s, int first, int n) { return Series(s.begin() + first, s.begin() + first + n); }

Series slice(const Series& s, std::size_t first, std::size_t n) { return Series(s.begin() + first, s.begin() + first + n); }

// Rescales each VER class with a penetration so the class delivers that
// share of load energy, split among units by their original energy.
void scale_classes(const ScenarioConfig& cfg, GridCase& g) {
  double load_energy = 0.0;
  for (const auto& z : g.load_zones) load_energy += std::accumulate(z.demand_profile.begin(), z.demand_profile.end(), 0.0);
  load_energy /= 60.0;
  for (VerKind kind : {VerKind::wind, VerKind::solar, VerKind::hydro_ror}) {
    const ClassForecast& f = class_of(cfg, kind);
    if (!f.penetration) continue;
    double class_energy = 0.0;
    for (const auto& v : g.var_resources)
      if (v.kind == kind) class_energy += std::accumulate(v.actual_profile.begin(), v.actual_profile.end(), 0.0);
    if (!(class_energy > 0.0)) continue;
    for (auto& v : g.var_resources) {
      if (v.kind != kind) continue;
      const double e = std::accumulate(v.actual_profile.begin(), v.actual_profile.end(), 0.0);
      if (!(e > 0.0)) continue;
      ForecastParams p;
      p.penetration = *f.penetration * e / class_energy;
      p.capacity_factor = f.capacity_factor;
      p.variability_scale = f.variability;
      v.actual_profile = scale_profile(v.actual_profile, p, load_energy);
      const double cap = capacity_for(v.actual_profile, f.capacity_factor);
      // Ramp limits keep their share of nameplate.
      if (v.capacity > 0.0) {
        v.ramp_up *= cap / v.capacity;
        v.ramp_dn *= cap / v.capacity;
      }
      v.capacity = cap;
    }
  }
}

}  // namespace

ScenarioInputs prepare_inputs(const ScenarioConfig& cfg) {
  ScenarioInputs in;
  in.grid = load_case(cfg.case_path);
  GridCase& g = in.grid;
  for (const auto& [k, v] : cfg.system_overrides) set_system_key(g.config, k, v);
  validate_case(g);
  const SystemConfig& sc = g.config;
  const double per_day = 24.0 / sc.t_h;
  if (std::abs(per_day - std::round(per_day)) > 1e-9) throw ValidationError("T_h must divide 24 hours");
  in.periods_per_day = static_cast<int>(std::lround(per_day));
  in.steps_per_period = static_cast<int>(std::lround(60.0 * sc.t_h)) / sc.t_m;
  in.first_minute = cfg.start_day * 1440;
  in.minutes = cfg.days * 1440;
  if (in.first_minute + in.minutes > g.minutes())
    throw ValidationError("days " + std::to_string(cfg.start_day) + ".." + std::to_string(cfg.start_day + cfg.days - 1) +
                          " exceed the " + std::to_string(g.minutes()) + " profile minutes");
  scale_classes(cfg, g);
  if (cfg.wind.mae_short_term > cfg.wind.mae_day_ahead || cfg.solar.mae_short_term > cfg.solar.mae_day_ahead ||
      cfg.hydro.mae_short_term > cfg.hydro.mae_day_ahead || cfg.load.mae_short_term > cfg.load.mae_day_ahead)
    warn("a short-term forecast error exceeds its day-ahead error");

  for (std::size_t i = 0; i < g.var_resources.size(); ++i) {
    const auto& v = g.var_resources[i];
    const ClassForecast& f = class_of(cfg, v.kind);
    ForecastParams p;
    p.mae_day_ahead = f.mae_day_ahead;
    p.mae_short_term = f.mae_short_term;
    p.seed = derive_seed(cfg.seed, 10, i);
    in.ver.push_back(build_forecast(window(v.actual_profile, in.first_minute, in.minutes), p, v.capacity, sc));
  }
  for (std::size_t z = 0; z < g.load_zones.size(); ++z) {
    ForecastParams p;
    p.mae_day_ahead = cfg.load.mae_day_ahead;
    p.mae_short_term = cfg.load.mae_short_term;
    p.seed = derive_seed(cfg.seed, 20, z);
    in.load.push_back(build_forecast(window(g.load_zones[z].demand_profile, in.first_minute, in.minutes), p,
                                     std::numeric_limits<double>::infinity(), sc));
  }
  return in;
}

ScenarioResults run_scenario(const ScenarioConfig& cfg) {
  ScenarioResults res;
  res.config = cfg;
  res.inputs = prepare_inputs(cfg);
  const ScenarioInputs& in = res.inputs;
  const GridCase& g = in.grid;
  const int P = in.periods_per_day, S = in.steps_per_period, tm = g.config.t_m;

  ChainedState state = ChainedState::from_case(g);
  res.slack_bus = choose_slack_bus(g, state.gen_on);
  const DcPowerFlow pf(g, res.slack_bus);
  const MinuteContext ctx{&pf, g.config.regulation_capacity};
  res.ledger = EwnLedger(g.generators.size());
  DispatchSetpoints prev = DispatchSetpoints::from_state(g, state);

  ScucOptions uc;
  uc.mip = cfg.mip;
  uc.periods = P;
  for (int d = 0; d < cfg.days; ++d) {
    const std::string at_day = "day " + std::to_string(cfg.start_day + d);
    ScucForecast f;
    for (const auto& fs : in.ver) f.ver.push_back(slice(fs.day_ahead, d * P, P));
    for (const auto& fs : in.load) f.load.push_back(slice(fs.day_ahead, d * P, P));
    DayResult day;
    try {
      day.schedule = run_scuc(g, f, cfg.flex, state, uc);
    } catch (const InfeasibleScheduleError& e) {
      throw InfeasibleScheduleError(at_day + " SCUC: " + e.what(), e.rows());
    } catch (const SolverError& e) {
      throw SolverError(at_day + " SCUC: " + e.what());
    }
    day.margins = compute_reserve_margins(day.schedule, g);
    state = day.schedule.final_state();

    for (int h = 0; h < P; ++h)
      for (int j = 0; j < S; ++j) {
        const long step = static_cast<long>(d) * P * S + h * S + j;
        ScedInput si;
        si.step = step;
        si.hour = h;
        for (const auto& fs : in.ver) si.ver.push_back(fs.short_term[step]);
        for (const auto& fs : in.load) si.load.push_back(fs.short_term[step]);
        try {
          prev = run_sced(g, day.schedule, si, &prev);
        } catch (const SolverError& e) {
          throw SolverError(at_day + " hour " + std::to_string(h) + " step " + std::to_string(step) + ": " + e.what());
        }
        res.steps.push_back(prev);
        for (int k = 0; k < tm; ++k) {
          MinuteActuals a;
          a.minute = static_cast<int>(step * tm + k);
          for (const auto& fs : in.ver) a.ver.push_back(fs.actual[a.minute]);
          for (const auto& fs : in.load) a.load.push_back(fs.actual[a.minute]);
          MinuteRecord rec = step_minute(g, prev, a, ctx);
          res.ledger.add(account_minute(rec, prev.gen_on, g));
          res.minutes.push_back(std::move(rec));
        }
      }
    res.days.push_back(std::move(day));
  }
  return res;
}

}  // namespace ewn
