#include "ewn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ewn/error.hpp"
#include "ewn/scenario.hpp"

namespace ewn {

Histogram histogram(const std::vector<double>& samples, int bins, double lo, double hi) {
  if (bins < 1) throw ParameterError("histogram needs at least one bin");
  if (!(hi > lo)) {
    lo -= 0.5;
    hi = lo + 1.0;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) continue;
    int i = static_cast<int>((x - lo) / (hi - lo) * bins);
    i = std::clamp(i, 0, bins - 1);
    // Floating rounding of the bin index is corrected against the edges.
    while (i > 0 && x < h.edges[i]) --i;
    while (i < bins - 1 && x >= h.edges[i + 1]) ++i;
    ++h.counts[i];
  }
  return h;
}

Histogram histogram(const std::vector<double>& samples, int bins) {
  if (samples.empty()) return histogram(samples, bins, 0.0, 0.0);
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  return histogram(samples, bins, *mn, *mx);
}

DurationCurve duration_curve(const std::vector<double>& series) {
  if (series.empty()) throw ParameterError("duration curve of an empty series");
  DurationCurve d;
  d.value = series;
  std::sort(d.value.begin(), d.value.end(), std::greater<>());
  const double n = static_cast<double>(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) d.fraction.push_back((i + 1) / n);
  return d;
}

double saturation_fraction(const std::vector<double>& regulation, double capacity, double tol) {
  if (regulation.empty()) return 0.0;
  long n = 0;
  for (double r : regulation)
    if (std::abs(r) >= capacity - tol) ++n;
  return static_cast<double>(n) / regulation.size();
}

namespace {

// Curtailed power below this is solver noise, not a curtailed step.
constexpr double kCurtailedMw = 1e-6;

std::string kind_name(VerKind k) { return k == VerKind::hydro_ror ? "hydro" : to_string(k); }

}  // namespace

MetricsReport compute_metrics(const ScenarioResults& r) {
  const GridCase& g = r.inputs.grid;
  const ScenarioInputs& in = r.inputs;
  MetricsReport m;
  m.days = static_cast<int>(r.days.size());
  m.steps = static_cast<long>(r.steps.size());
  m.minutes = static_cast<long>(r.minutes.size());
  m.regulation_capacity = g.config.regulation_capacity;
  m.rho_water = g.config.water.rho_water;

  for (const DayResult& d : r.days) {
    m.day_ahead_cost_by_day.push_back(d.schedule.objective);
    m.day_ahead_cost += d.schedule.objective;
  }
  for (const DispatchSetpoints& s : r.steps) m.real_time_cost += s.objective;

  const EwnTotals& t = r.ledger.totals();
  for (std::size_t k = 0; k < g.generators.size(); ++k) {
    const std::string kind = to_string(g.generators[k].fuel_kind);
    m.fuel_kt[kind] += t.fuel_kg[k] / 1e6;
    m.co2_kt[kind] += t.co2_kg[k] / 1e6;
  }
  for (const auto& [kind, v] : m.fuel_kt) m.fuel_total_kt += v;
  for (const auto& [kind, v] : m.co2_kt) m.co2_total_kt += v;

  // Minute totals are summed in minute order so exported columns add up to
  // the same figures.
  for (const EwnMinute& e : r.ledger.minutes()) {
    double w = 0.0, ev = 0.0, bd = 0.0, k = 0.0;
    for (std::size_t i = 0; i < e.withdrawal_kg.size(); ++i) {
      w += e.withdrawal_kg[i];
      ev += e.evaporation_kg[i];
      bd += e.blowdown_kg[i];
      k += e.consumption_kg[i];
    }
    m.withdrawal.push_back(w);
    m.evaporation.push_back(ev);
    m.withdrawal_kg += w;
    m.evaporation_kg += ev;
    m.blowdown_kg += bd;
    m.consumption_kg += k;
  }
  m.renewable_mwh = t.renewable_mwh;
  m.water_supply_mwh = t.water_supply_mwh;
  m.wastewater_mwh = t.wastewater_mwh;
  m.end_use_mwh = t.end_use_mwh;

  // Curtailment by class. Available energy counts only resources that may
  // be curtailed in this scenario.
  const Participation part = Participation::from(g, r.config.flex);
  std::vector<std::string> kinds;
  for (const auto& v : g.var_resources) kinds.push_back(kind_name(v.kind));
  for (const char* k : {"wind", "solar", "hydro", "load"}) m.curtailment[k];
  std::map<std::string, long> steps_curtailed;
  for (const DispatchSetpoints& s : r.steps) {
    std::map<std::string, bool> any;
    for (std::size_t i = 0; i < g.var_resources.size(); ++i)
      if (s.ver_curtailment[i] * g.var_resources[i].curtailable_fraction * s.ver_available[i] > kCurtailedMw)
        any[kinds[i]] = true;
    for (std::size_t z = 0; z < g.load_zones.size(); ++z)
      if (s.load_curtailment[z] * g.load_zones[z].curtailable_fraction * s.load_forecast[z] > kCurtailedMw)
        any["load"] = true;
    for (const auto& [k, b] : any) steps_curtailed[k] += b;
  }
  for (const MinuteRecord& rec : r.minutes) {
    const int local = rec.minute;
    std::map<std::string, double> mw;
    for (std::size_t i = 0; i < g.var_resources.size(); ++i) {
      const auto& v = g.var_resources[i];
      const double avail = in.ver[i].actual[local];
      if (part.ver_curtailable[i] && v.curtailable_fraction > 0.0) m.curtailment[kinds[i]].curtailable_gwh += avail / 6e4;
      mw[kinds[i]] += avail - rec.ver_output[i];
    }
    for (std::size_t z = 0; z < g.load_zones.size(); ++z) {
      const double dem = in.load[z].actual[local];
      if (g.load_zones[z].curtailable_fraction > 0.0) m.curtailment["load"].curtailable_gwh += dem / 6e4;
      mw["load"] += dem - rec.load[z];
    }
    for (const auto& [k, v] : mw) {
      CurtailmentStats& c = m.curtailment[k];
      c.curtailed_gwh += v / 6e4;
      c.max_mw = std::max(c.max_mw, v);
    }
  }
  for (auto& [k, c] : m.curtailment) {
    c.percent_energy = c.curtailable_gwh > 0.0 ? 100.0 * c.curtailed_gwh / c.curtailable_gwh : 0.0;
    c.percent_time = m.steps > 0 ? 100.0 * steps_curtailed[k] / m.steps : 0.0;
  }

  const double cap = m.regulation_capacity;
  long up = 0, dn = 0, unserved = 0;
  for (std::size_t i = 0; i < r.minutes.size(); ++i) {
    const MinuteRecord& rec = r.minutes[i];
    m.regulation.push_back(rec.regulation);
    if (rec.regulation >= cap - 1e-9) ++up;
    if (rec.regulation <= -(cap - 1e-9)) ++dn;
    if (rec.slack != 0.0) ++unserved;
    m.max_abs_slack_mw = std::max(m.max_abs_slack_mw, std::abs(rec.slack));
    m.slack_mwh += std::abs(rec.slack) / 60.0;
    if (!rec.flow_violations.empty()) ++m.flow_violation_minutes;
    double nl = 0.0;
    for (const auto& fs : in.load) nl += fs.actual[rec.minute];
    for (const auto& fs : in.ver) nl -= fs.actual[rec.minute];
    m.net_load.push_back(nl);
  }
  if (m.minutes > 0) {
    m.saturation = saturation_fraction(m.regulation, cap);
    m.saturation_up = static_cast<double>(up) / m.minutes;
    m.saturation_dn = static_cast<double>(dn) / m.minutes;
    m.unserved_fraction = static_cast<double>(unserved) / m.minutes;
    long neg = 0;
    for (double x : m.net_load) neg += x < 0.0;
    m.net_load_negative_percent = 100.0 * neg / m.minutes;
  }

  for (std::size_t s = 0; s < r.steps.size(); ++s) {
    const long day = static_cast<long>(s) / (in.periods_per_day * in.steps_per_period);
    const int hour = static_cast<int>((s / in.steps_per_period) % in.periods_per_day);
    const ReserveMargins& rm = r.days[day].margins[hour];
    m.lfr_up.push_back(rm.lfr_up);
    m.lfr_dn.push_back(rm.lfr_dn);
    m.ramp_up.push_back(rm.ramp_up);
    m.ramp_dn.push_back(rm.ramp_dn);
  }
  return m;
}

const std::vector<std::string>& histogram_series_names() {
  static const std::vector<std::string> names{"lfr_up", "lfr_dn", "ramp_up", "ramp_dn", "regulation",
                                              "withdrawal", "evaporation", "net_load"};
  return names;
}

const std::vector<double>& histogram_series(const MetricsReport& m, const std::string& name) {
  if (name == "lfr_up") return m.lfr_up;
  if (name == "lfr_dn") return m.lfr_dn;
  if (name == "ramp_up") return m.ramp_up;
  if (name == "ramp_dn") return m.ramp_dn;
  if (name == "regulation") return m.regulation;
  if (name == "withdrawal") return m.withdrawal;
  if (name == "evaporation") return m.evaporation;
  if (name == "net_load") return m.net_load;
  throw ParameterError("unknown histogram series " + name);
}

}  // namespace ewn
