#include "ewn/report.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"

#include "ewn/csv.hpp"
#include "ewn/log.hpp"
#include "ewn/scenario.hpp"

namespace ewn {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw LoadError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw LoadError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw LoadError("write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  finish(out, path);
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::string num(double v) { return format_double(v); }

class Table {
 public:
  Table(const fs::path& path, std::vector<std::string> header) : path_(path), out_(open_out(path)) {
    write_csv_row(out_, header);
  }
  void row(const std::vector<std::string>& fields) { write_csv_row(out_, fields); }
  void close() { finish(out_, path_); }

 private:
  fs::path path_;
  std::ofstream out_;
};

Json curtailment_json(const CurtailmentStats& c) {
  return Json{{"curtailable_gwh", c.curtailable_gwh}, {"curtailed_gwh", c.curtailed_gwh},
              {"percent_energy", c.percent_energy},   {"percent_time", c.percent_time},
              {"max_mw", c.max_mw}};
}

Json fingerprint_json(const ScenarioConfig& c) {
  auto cls = [](const ClassForecast& f) {
    Json j{{"capacity_factor", f.capacity_factor}, {"variability", f.variability},
           {"mae_day_ahead", f.mae_day_ahead},     {"mae_short_term", f.mae_short_term}};
    j["penetration"] = f.penetration ? Json(*f.penetration) : Json(nullptr);
    return j;
  };
  Json overrides = Json::array();
  for (const auto& [k, v] : c.system_overrides) overrides.push_back(Json::array({k, v}));
  return Json{{"case", fs::weakly_canonical(c.case_path).generic_string()},
              {"start_day", c.start_day},
              {"days", c.days},
              {"seed", c.seed},
              {"wind", cls(c.wind)},
              {"solar", cls(c.solar)},
              {"hydro", cls(c.hydro)},
              {"load", cls(c.load)},
              {"system", overrides},
              {"mip", {{"gap_limit", c.mip.gap_limit}, {"node_limit", c.mip.node_limit},
                       {"segments", c.mip.segments}, {"dive_heuristic", c.mip.dive_heuristic}}}};
}

Json summary_json(const ScenarioResults& r, const MetricsReport& m) {
  const GridCase& g = r.inputs.grid;
  const double rho = m.rho_water;
  Json j;
  j["scenario"] = r.config.name;
  j["flexibility"] = {{"hydro_curtailable", r.config.flex.hydro_curtailable},
                      {"water_dr_enabled", r.config.flex.water_dr_enabled}};
  j["fingerprint"] = fingerprint_json(r.config);
  j["histogram_bins"] = r.config.histogram_bins;
  j["counts"] = {{"days", m.days}, {"steps", m.steps}, {"minutes", m.minutes}};
  j["costs"] = {{"day_ahead", m.day_ahead_cost}, {"real_time", m.real_time_cost},
                {"day_ahead_by_day", m.day_ahead_cost_by_day}};
  Json fuel = Json::object(), co2 = Json::object();
  for (const auto& [k, v] : m.fuel_kt) fuel[k] = v;
  for (const auto& [k, v] : m.co2_kt) co2[k] = v;
  fuel["total"] = m.fuel_total_kt;
  co2["total"] = m.co2_total_kt;
  j["fuel_kt"] = fuel;
  j["co2_kt"] = co2;
  j["water"] = {{"withdrawal_kg", m.withdrawal_kg},         {"evaporation_kg", m.evaporation_kg},
                {"blowdown_kg", m.blowdown_kg},             {"consumption_kg", m.consumption_kg},
                {"withdrawal_m3", m.withdrawal_kg / rho},   {"evaporation_m3", m.evaporation_kg / rho},
                {"consumption_m3", m.consumption_kg / rho}, {"rho_water", rho}};
  j["electric_mwh"] = {{"renewable", m.renewable_mwh}, {"water_supply", m.water_supply_mwh},
                       {"wastewater", m.wastewater_mwh}, {"end_use", m.end_use_mwh}};
  Json cur = Json::object();
  for (const auto& [k, c] : m.curtailment) cur[k] = curtailment_json(c);
  j["curtailment"] = cur;
  j["regulation"] = {{"capacity_mw", m.regulation_capacity},
                     {"saturation", m.saturation},
                     {"saturation_up", m.saturation_up},
                     {"saturation_dn", m.saturation_dn},
                     {"unserved_fraction", m.unserved_fraction},
                     {"max_abs_slack_mw", m.max_abs_slack_mw},
                     {"slack_mwh", m.slack_mwh}};
  j["network"] = {{"slack_bus", g.buses[r.slack_bus].external_id},
                  {"flow_violation_minutes", m.flow_violation_minutes}};
  j["net_load"] = {{"negative_percent", m.net_load_negative_percent}};
  return j;
}

// Joins resource ids behind a column prefix.
template <class Range>
void add_columns(std::vector<std::string>& h, const std::string& prefix, const Range& items) {
  for (const auto& it : items) h.push_back(prefix + it.id);
}

void export_scuc(const ScenarioResults& r, const fs::path& dir) {
  const GridCase& g = r.inputs.grid;
  Table days(dir / "scuc" / "days.csv", {"day", "objective", "mip_gap", "nodes", "status"});
  Table sched(dir / "scuc" / "schedule.csv", {"day", "hour", "resource", "id", "quantity", "value"});
  Table res(dir / "scuc" / "reserves.csv", {"day", "hour", "lfr_up", "lfr_dn", "ramp_up", "ramp_dn"});
  for (std::size_t d = 0; d < r.days.size(); ++d) {
    const DayAheadSchedule& s = r.days[d].schedule;
    const std::string day = std::to_string(r.config.start_day + static_cast<int>(d));
    days.row({day, num(s.objective), num(s.mip_gap), std::to_string(s.nodes), opt::to_string(s.status)});
    for (int t = 0; t < s.periods; ++t) {
      const std::string hour = std::to_string(t);
      auto put = [&](const char* kind, const std::string& id, const char* q, double v) {
        sched.row({day, hour, kind, id, q, num(v)});
      };
      for (std::size_t k = 0; k < g.generators.size(); ++k) {
        put("generator", g.generators[k].id, "on", s.gen_on[k][t]);
        put("generator", g.generators[k].id, "power", s.gen_power[k][t]);
      }
      for (std::size_t k = 0; k < g.dr_units.size(); ++k) {
        put("dr", g.dr_units[k].id, "on", s.dr_on[k][t]);
        put("dr", g.dr_units[k].id, "power", s.dr_power[k][t]);
      }
      for (std::size_t k = 0; k < g.storage.size(); ++k) {
        put("storage", g.storage[k].id, "discharge", s.storage_discharge[k][t]);
        put("storage", g.storage[k].id, "charge", s.storage_charge[k][t]);
        put("storage", g.storage[k].id, "energy", s.storage_energy[k][t]);
      }
      for (std::size_t k = 0; k < g.var_resources.size(); ++k) {
        put("ver", g.var_resources[k].id, "forecast", s.ver_forecast[k][t]);
        put("ver", g.var_resources[k].id, "curtailment", s.ver_curtailment[k][t]);
        put("ver", g.var_resources[k].id, "delivered", s.ver_delivered[k][t]);
      }
      for (std::size_t k = 0; k < g.load_zones.size(); ++k) {
        put("load", g.load_zones[k].id, "forecast", s.load_forecast[k][t]);
        put("load", g.load_zones[k].id, "curtailment", s.load_curtailment[k][t]);
      }
      const ReserveMargins& m = r.days[d].margins[t];
      res.row({day, hour, num(m.lfr_up), num(m.lfr_dn), num(m.ramp_up), num(m.ramp_dn)});
    }
  }
  days.close();
  sched.close();
  res.close();
}

void export_sced(const ScenarioResults& r, const MetricsReport& m, const fs::path& dir) {
  const GridCase& g = r.inputs.grid;
  const int per_day = r.inputs.periods_per_day * r.inputs.steps_per_period;
  std::vector<std::string> h{"step",   "day",    "hour",    "objective", "hourly_rate", "penalty_abs_mw",
                             "lfr_up", "lfr_dn", "ramp_up", "ramp_dn"};
  add_columns(h, "P_G:", g.generators);
  add_columns(h, "P_D:", g.dr_units);
  add_columns(h, "P_S:", g.storage);
  add_columns(h, "w_V:", g.var_resources);
  add_columns(h, "w_L:", g.load_zones);
  Table t(dir / "sced" / "steps.csv", h);
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const DispatchSetpoints& s = r.steps[i];
    double pen = 0.0;
    for (double p : s.penalty) pen += std::abs(p);
    std::vector<std::string> row{std::to_string(s.step),
                                 std::to_string(r.config.start_day + static_cast<int>(i / per_day)),
                                 std::to_string((i / r.inputs.steps_per_period) % r.inputs.periods_per_day),
                                 num(s.objective),
                                 num(s.hourly_rate),
                                 num(pen),
                                 num(m.lfr_up[i]),
                                 num(m.lfr_dn[i]),
                                 num(m.ramp_up[i]),
                                 num(m.ramp_dn[i])};
    for (double v : s.gen_power) row.push_back(num(v));
    for (double v : s.dr_power) row.push_back(num(v));
    for (double v : s.storage_injection) row.push_back(num(v));
    for (double v : s.ver_curtailment) row.push_back(num(v));
    for (double v : s.load_curtailment) row.push_back(num(v));
    t.row(row);
  }
  t.close();
}

void export_minutes(const ScenarioResults& r, const MetricsReport& m, const fs::path& dir) {
  const GridCase& g = r.inputs.grid;
  Table sys(dir / "minutes" / "system.csv",
            {"minute", "injection", "demand", "net_load", "imbalance", "regulation", "regulation_unassigned", "slack",
             "flow_violations"});
  for (std::size_t i = 0; i < r.minutes.size(); ++i) {
    const MinuteRecord& rec = r.minutes[i];
    std::string viol;
    for (const std::string& id : rec.flow_violations) viol += (viol.empty() ? "" : ";") + id;
    sys.row({std::to_string(rec.minute), num(rec.injection), num(rec.demand), num(m.net_load[i]), num(rec.imbalance),
             num(rec.regulation), num(rec.regulation_unassigned), num(rec.slack), viol});
  }
  sys.close();

  if (r.config.minute_log == MinuteLog::none) return;
  std::vector<std::string> h{"minute"};
  add_columns(h, "P_G:", g.generators);
  add_columns(h, "P_D:", g.dr_units);
  add_columns(h, "P_S:", g.storage);
  add_columns(h, "P_V:", g.var_resources);
  add_columns(h, "L:", g.load_zones);
  add_columns(h, "F:", g.lines);
  for (const Bus& b : g.buses) h.push_back("theta:" + std::to_string(b.external_id));
  auto values = [](const MinuteRecord& rec) {
    std::vector<double> v{static_cast<double>(rec.minute)};
    for (const auto* s : {&rec.gen_power, &rec.dr_power, &rec.storage_injection, &rec.ver_output, &rec.load,
                          &rec.flows, &rec.angles})
      v.insert(v.end(), s->begin(), s->end());
    return v;
  };
  if (r.config.minute_log == MinuteLog::csv) {
    Table t(dir / "minutes" / "minutes.csv", h);
    for (const MinuteRecord& rec : r.minutes) {
      std::vector<std::string> row;
      for (double v : values(rec)) row.push_back(num(v));
      row[0] = std::to_string(rec.minute);
      t.row(row);
    }
    t.close();
    return;
  }
  // Row-major little-endian float64, one row per minute, columns as listed.
  std::string cols;
  for (const std::string& c : h) cols += c + "\n";
  write_text(dir / "minutes" / "minutes_columns.txt", cols);
  const fs::path bin = dir / "minutes" / "minutes.bin";
  std::ofstream out = open_out(bin, true);
  for (const MinuteRecord& rec : r.minutes) {
    for (double v : values(rec)) {
      unsigned char bytes[sizeof(double)];
      std::uint64_t u;
      std::memcpy(&u, &v, sizeof u);
      for (std::size_t b = 0; b < sizeof u; ++b) bytes[b] = static_cast<unsigned char>(u >> (8 * b));
      out.write(reinterpret_cast<const char*>(bytes), sizeof bytes);
    }
  }
  finish(out, bin);
}

void export_ewn(const ScenarioResults& r, const MetricsReport& m, const fs::path& dir) {
  const GridCase& g = r.inputs.grid;
  Table t(dir / "ewn" / "minutes.csv",
          {"minute", "fuel_kg", "co2_kg", "thermal_loss_mj", "thermal_load_mj", "withdrawal_kg", "evaporation_kg",
           "blowdown_kg", "consumption_kg", "renewable_mw", "water_supply_mw", "wastewater_mw", "end_use_mw"});
  const auto& mins = r.ledger.minutes();
  for (const EwnMinute& e : mins) {
    auto sum = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s;
    };
    t.row({std::to_string(e.minute), num(sum(e.fuel_kg)), num(sum(e.co2_kg)), num(sum(e.thermal_loss_mj)),
           num(sum(e.thermal_load_mj)), num(sum(e.withdrawal_kg)), num(sum(e.evaporation_kg)),
           num(sum(e.blowdown_kg)), num(sum(e.consumption_kg)), num(e.electric.renewable),
           num(e.electric.water_supply), num(e.electric.wastewater), num(e.electric.end_use)});
  }
  t.close();

  const EwnTotals& tot = r.ledger.totals();
  std::vector<double> energy(g.generators.size(), 0.0);
  for (const MinuteRecord& rec : r.minutes)
    for (std::size_t k = 0; k < energy.size(); ++k) energy[k] += rec.gen_power[k] / 60.0;
  Table gens(dir / "ewn" / "generators.csv", {"id", "fuel", "cooling", "energy_mwh", "fuel_kg", "co2_kg",
                                              "withdrawal_kg", "evaporation_kg", "consumption_kg"});
  for (std::size_t k = 0; k < g.generators.size(); ++k) {
    const auto& gen = g.generators[k];
    gens.row({gen.id, to_string(gen.fuel_kind), to_string(gen.cooling_kind), num(energy[k]), num(tot.fuel_kg[k]),
              num(tot.co2_kg[k]), num(tot.withdrawal_kg[k]), num(tot.evaporation_kg[k]), num(tot.consumption_kg[k])});
  }
  gens.close();

  // Daily totals of the minute columns.
  Json daily = Json::array();
  for (std::size_t d = 0; d * 1440 < mins.size(); ++d) {
    double w = 0.0, ev = 0.0, k = 0.0, f = 0.0, c = 0.0;
    for (std::size_t i = d * 1440; i < std::min(mins.size(), (d + 1) * 1440); ++i)
      for (std::size_t j = 0; j < g.generators.size(); ++j) {
        w += mins[i].withdrawal_kg[j];
        ev += mins[i].evaporation_kg[j];
        k += mins[i].consumption_kg[j];
        f += mins[i].fuel_kg[j];
        c += mins[i].co2_kg[j];
      }
    daily.push_back({{"day", r.config.start_day + static_cast<int>(d)},
                     {"fuel_kg", f},
                     {"co2_kg", c},
                     {"withdrawal_kg", w},
                     {"evaporation_kg", ev},
                     {"consumption_kg", k}});
  }
  Json j{{"withdrawal_kg", m.withdrawal_kg},
         {"evaporation_kg", m.evaporation_kg},
         {"blowdown_kg", m.blowdown_kg},
         {"consumption_kg", m.consumption_kg},
         {"withdrawal_m3", m.withdrawal_kg / m.rho_water},
         {"evaporation_m3", m.evaporation_kg / m.rho_water},
         {"consumption_m3", m.consumption_kg / m.rho_water},
         {"fuel_kt", m.fuel_total_kt},
         {"co2_kt", m.co2_total_kt},
         {"renewable_mwh", m.renewable_mwh},
         {"water_supply_mwh", m.water_supply_mwh},
         {"wastewater_mwh", m.wastewater_mwh},
         {"end_use_mwh", m.end_use_mwh},
         {"daily", daily}};
  write_json(dir / "ewn" / "summary.json", j);
}

void write_histogram(const fs::path& path, const Histogram& h) {
  Table t(path, {"bin_lo", "bin_hi", "count"});
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    t.row({num(h.edges[i]), num(h.edges[i + 1]), std::to_string(h.counts[i])});
  t.close();
}

std::vector<double> column(const CsvTable& t, const std::string& name) {
  std::vector<double> v;
  v.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) v.push_back(t.number(i, name));
  return v;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace

fs::path scenario_dir(const ScenarioConfig& config) { return config.output_dir / config.name; }

std::string scenario_fingerprint(const ScenarioConfig& config) { return fingerprint_json(config).dump(); }

void export_report(const ScenarioResults& r, const MetricsReport& m, const fs::path& dir) {
  write_json(dir / "summary.json", summary_json(r, m));
  write_text(dir / "config.txt", format_config(r.config));
  export_scuc(r, dir);
  export_sced(r, m, dir);
  export_minutes(r, m, dir);
  export_ewn(r, m, dir);
  for (const std::string& name : histogram_series_names())
    write_histogram(dir / "histograms" / (name + ".csv"), histogram(histogram_series(m, name), r.config.histogram_bins));
  if (!m.regulation.empty()) {
    const DurationCurve dc = duration_curve(m.regulation);
    Table t(dir / "duration" / "regulation.csv", {"fraction", "regulation_mw"});
    for (std::size_t i = 0; i < dc.value.size(); ++i) t.row({num(dc.fraction[i]), num(dc.value[i])});
    t.close();
  }
}

StoredScenario stored_scenario(const ScenarioResults& r, const MetricsReport& m) {
  StoredScenario s;
  s.name = r.config.name;
  s.fingerprint = scenario_fingerprint(r.config);
  s.flex = r.config.flex;
  s.histogram_bins = r.config.histogram_bins;
  s.metrics = m;
  return s;
}

StoredScenario load_scenario(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError("result directory " + dir.string() + " does not exist");
  const Json j = read_json(dir / "summary.json");
  StoredScenario s;
  MetricsReport& m = s.metrics;
  try {
    s.name = j.at("scenario").get<std::string>();
    s.fingerprint = j.at("fingerprint").dump();
    s.flex.hydro_curtailable = j.at("flexibility").at("hydro_curtailable").get<bool>();
    s.flex.water_dr_enabled = j.at("flexibility").at("water_dr_enabled").get<bool>();
    s.histogram_bins = j.at("histogram_bins").get<int>();
    const Json& counts = j.at("counts");
    m.days = counts.at("days").get<int>();
    m.steps = counts.at("steps").get<long>();
    m.minutes = counts.at("minutes").get<long>();
    m.day_ahead_cost = j.at("costs").at("day_ahead").get<double>();
    m.real_time_cost = j.at("costs").at("real_time").get<double>();
    m.day_ahead_cost_by_day = j.at("costs").at("day_ahead_by_day").get<std::vector<double>>();
    for (const auto& [k, v] : j.at("fuel_kt").items())
      if (k != "total") m.fuel_kt[k] = v.get<double>();
    for (const auto& [k, v] : j.at("co2_kt").items())
      if (k != "total") m.co2_kt[k] = v.get<double>();
    m.fuel_total_kt = j.at("fuel_kt").at("total").get<double>();
    m.co2_total_kt = j.at("co2_kt").at("total").get<double>();
    const Json& w = j.at("water");
    m.withdrawal_kg = w.at("withdrawal_kg").get<double>();
    m.evaporation_kg = w.at("evaporation_kg").get<double>();
    m.blowdown_kg = w.at("blowdown_kg").get<double>();
    m.consumption_kg = w.at("consumption_kg").get<double>();
    m.rho_water = w.at("rho_water").get<double>();
    const Json& e = j.at("electric_mwh");
    m.renewable_mwh = e.at("renewable").get<double>();
    m.water_supply_mwh = e.at("water_supply").get<double>();
    m.wastewater_mwh = e.at("wastewater").get<double>();
    m.end_use_mwh = e.at("end_use").get<double>();
    for (const auto& [k, v] : j.at("curtailment").items()) {
      CurtailmentStats& c = m.curtailment[k];
      c.curtailable_gwh = v.at("curtailable_gwh").get<double>();
      c.curtailed_gwh = v.at("curtailed_gwh").get<double>();
      c.percent_energy = v.at("percent_energy").get<double>();
      c.percent_time = v.at("percent_time").get<double>();
      c.max_mw = v.at("max_mw").get<double>();
    }
    const Json& reg = j.at("regulation");
    m.regulation_capacity = reg.at("capacity_mw").get<double>();
    m.saturation = reg.at("saturation").get<double>();
    m.saturation_up = reg.at("saturation_up").get<double>();
    m.saturation_dn = reg.at("saturation_dn").get<double>();
    m.unserved_fraction = reg.at("unserved_fraction").get<double>();
    m.max_abs_slack_mw = reg.at("max_abs_slack_mw").get<double>();
    m.slack_mwh = reg.at("slack_mwh").get<double>();
    m.flow_violation_minutes = j.at("network").at("flow_violation_minutes").get<long>();
    m.net_load_negative_percent = j.at("net_load").at("negative_percent").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw LoadError((dir / "summary.json").string() + ": " + ex.what());
  }
  const CsvTable sys = CsvTable::read(dir / "minutes" / "system.csv");
  m.regulation = column(sys, "regulation");
  m.net_load = column(sys, "net_load");
  const CsvTable ewn = CsvTable::read(dir / "ewn" / "minutes.csv");
  m.withdrawal = column(ewn, "withdrawal_kg");
  m.evaporation = column(ewn, "evaporation_kg");
  const CsvTable steps = CsvTable::read(dir / "sced" / "steps.csv");
  m.lfr_up = column(steps, "lfr_up");
  m.lfr_dn = column(steps, "lfr_dn");
  m.ramp_up = column(steps, "ramp_up");
  m.ramp_dn = column(steps, "ramp_dn");
  if (static_cast<long>(m.regulation.size()) != m.minutes || static_cast<long>(m.lfr_up.size()) != m.steps)
    throw LoadError(dir.string() + ": series lengths disagree with summary.json counts");
  return s;
}

const ComparisonRow& ComparisonReport::row(const std::string& metric) const {
  for (const ComparisonRow& r : rows)
    if (r.metric == metric) return r;
  throw ParameterError("comparison has no metric " + metric);
}

ComparisonReport compare_scenarios(const StoredScenario& flex, const StoredScenario& conv) {
  if (flex.fingerprint != conv.fingerprint)
    throw ComparisonError("scenarios '" + flex.name + "' and '" + conv.name +
                          "' differ in case, dates, seed, forecast or system settings");
  ComparisonReport rep;
  rep.flexible_name = flex.name;
  rep.conventional_name = conv.name;
  const MetricsReport &a = flex.metrics, &b = conv.metrics;
  auto add = [&](const std::string& metric, const std::string& unit, double fa, double fb) {
    ComparisonRow r{metric, unit, fa, fb, fb - fa, std::nullopt};
    if (fb != 0.0)
      r.percent = 100.0 * (fb - fa) / fb;
    else if (fa == 0.0)
      r.percent = 0.0;
    rep.rows.push_back(r);
  };
  add("day_ahead_cost", "$", a.day_ahead_cost, b.day_ahead_cost);
  add("real_time_cost", "$", a.real_time_cost, b.real_time_cost);
  std::set<std::string> kinds;
  for (const auto& [k, v] : a.fuel_kt) kinds.insert(k);
  for (const auto& [k, v] : b.fuel_kt) kinds.insert(k);
  auto get = [](const std::map<std::string, double>& m, const std::string& k) {
    const auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  };
  for (const std::string& k : kinds) add("fuel_" + k, "kt", get(a.fuel_kt, k), get(b.fuel_kt, k));
  add("fuel_total", "kt", a.fuel_total_kt, b.fuel_total_kt);
  for (const std::string& k : kinds) add("co2_" + k, "kt", get(a.co2_kt, k), get(b.co2_kt, k));
  add("co2_total", "kt", a.co2_total_kt, b.co2_total_kt);
  add("water_withdrawal", "m3", a.withdrawal_kg / a.rho_water, b.withdrawal_kg / b.rho_water);
  add("water_evaporation", "m3", a.evaporation_kg / a.rho_water, b.evaporation_kg / b.rho_water);
  add("water_consumption", "m3", a.consumption_kg / a.rho_water, b.consumption_kg / b.rho_water);
  std::set<std::string> ck;
  for (const auto& [k, v] : a.curtailment) ck.insert(k);
  for (const auto& [k, v] : b.curtailment) ck.insert(k);
  for (const std::string& k : ck) {
    const CurtailmentStats ca = a.curtailment.count(k) ? a.curtailment.at(k) : CurtailmentStats{};
    const CurtailmentStats cb = b.curtailment.count(k) ? b.curtailment.at(k) : CurtailmentStats{};
    add("curtailment_" + k + "_curtailable", "GWh", ca.curtailable_gwh, cb.curtailable_gwh);
    add("curtailment_" + k + "_curtailed", "GWh", ca.curtailed_gwh, cb.curtailed_gwh);
    add("curtailment_" + k + "_energy", "%", ca.percent_energy, cb.percent_energy);
    add("curtailment_" + k + "_time", "%", ca.percent_time, cb.percent_time);
    add("curtailment_" + k + "_max", "MW", ca.max_mw, cb.max_mw);
  }
  add("regulation_saturation", "%", 100.0 * a.saturation, 100.0 * b.saturation);
  add("regulation_saturation_up", "%", 100.0 * a.saturation_up, 100.0 * b.saturation_up);
  add("regulation_saturation_dn", "%", 100.0 * a.saturation_dn, 100.0 * b.saturation_dn);
  add("unserved_minutes", "%", 100.0 * a.unserved_fraction, 100.0 * b.unserved_fraction);
  add("slack_energy", "MWh", a.slack_mwh, b.slack_mwh);
  add("net_load_negative", "%", a.net_load_negative_percent, b.net_load_negative_percent);
  add("renewable_delivered", "MWh", a.renewable_mwh, b.renewable_mwh);
  add("water_supply_electricity", "MWh", a.water_supply_mwh, b.water_supply_mwh);
  add("wastewater_electricity", "MWh", a.wastewater_mwh, b.wastewater_mwh);
  add("end_use_electricity", "MWh", a.end_use_mwh, b.end_use_mwh);
  rep.withdrawal_percent_difference = rep.row("water_withdrawal").percent;

  if (flex.histogram_bins != conv.histogram_bins)
    warn("histogram bin counts differ; using " + std::to_string(flex.histogram_bins));
  for (const std::string& name : histogram_series_names()) {
    const auto& sa = histogram_series(a, name);
    const auto& sb = histogram_series(b, name);
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto* s : {&sa, &sb})
      for (double x : *s) {
        lo = any ? std::min(lo, x) : x;
        hi = any ? std::max(hi, x) : x;
        any = true;
      }
    rep.histograms.push_back(
        {name, histogram(sa, flex.histogram_bins, lo, hi), histogram(sb, flex.histogram_bins, lo, hi)});
  }
  return rep;
}

void write_comparison(const ComparisonReport& rep, const fs::path& dir) {
  Table t(dir / "comparison.csv", {"metric", "unit", "flexible", "conventional", "difference", "percent_change"});
  Json rows = Json::array();
  for (const ComparisonRow& r : rep.rows) {
    t.row({r.metric, r.unit, num(r.flexible), num(r.conventional), num(r.difference),
           r.percent ? num(*r.percent) : std::string()});
    rows.push_back({{"metric", r.metric},
                    {"unit", r.unit},
                    {"flexible", r.flexible},
                    {"conventional", r.conventional},
                    {"difference", r.difference},
                    {"percent_change", r.percent ? Json(*r.percent) : Json(nullptr)}});
  }
  t.close();

  // Side-by-side tables: one column per kind, rows flexible, conventional,
  // difference and percent change.
  auto side_by_side = [&](const std::string& file, const std::string& prefix) {
    std::vector<const ComparisonRow*> cols;
    for (const ComparisonRow& r : rep.rows)
      if (r.metric.rfind(prefix, 0) == 0) cols.push_back(&r);
    std::vector<std::string> h{"case"};
    for (const auto* c : cols) h.push_back(c->metric.substr(prefix.size()));
    Table s(dir / "tables" / file, h);
    std::vector<std::string> fa{rep.flexible_name}, fb{rep.conventional_name}, fd{"difference"}, fp{"percent_change"};
    for (const auto* c : cols) {
      fa.push_back(num(c->flexible));
      fb.push_back(num(c->conventional));
      fd.push_back(num(c->difference));
      fp.push_back(c->percent ? num(*c->percent) : std::string());
    }
    for (const auto& row : {fa, fb, fd, fp}) s.row(row);
    s.close();
  };
  side_by_side("fuel_kt.csv", "fuel_");
  side_by_side("co2_kt.csv", "co2_");
  side_by_side("curtailment.csv", "curtailment_");

  for (const JointHistogram& jh : rep.histograms) {
    Table h(dir / "histograms" / (jh.series + ".csv"), {"bin_lo", "bin_hi", "flexible", "conventional"});
    for (std::size_t i = 0; i < jh.flexible.counts.size(); ++i)
      h.row({num(jh.flexible.edges[i]), num(jh.flexible.edges[i + 1]), std::to_string(jh.flexible.counts[i]),
             std::to_string(jh.conventional.counts[i])});
    h.close();
  }
  Json j{{"flexible", rep.flexible_name},
         {"conventional", rep.conventional_name},
         {"withdrawal_percent_difference",
          rep.withdrawal_percent_difference ? Json(*rep.withdrawal_percent_difference) : Json(nullptr)},
         {"rows", rows}};
  write_json(dir / "comparison.json", j);
}

}  // namespace ewn
