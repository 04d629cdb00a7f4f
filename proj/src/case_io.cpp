#include <algorithm>
#include <fstream>
#include <map>

#include "ewn/csv.hpp"
#include "ewn/error.hpp"
#include "ewn/grid_model.hpp"

namespace fs = std::filesystem;

namespace ewn {
namespace {

CsvTable require(const fs::path& dir, const std::string& file) {
  const fs::path p = dir / file;
  if (!fs::exists(p)) throw LoadError("missing case file " + file + " in " + dir.string());
  return CsvTable::read(p);
}

class BusMap {
 public:
  explicit BusMap(const std::vector<Bus>& buses) {
    for (const Bus& b : buses) index_[b.external_id] = b.id;
  }
  int operator()(const CsvTable& t, std::size_t row, const char* column = "bus") const {
    const long ext = t.integer(row, column);
    const auto it = index_.find(ext);
    if (it == index_.end())
      throw ValidationError(t.where(row) + ": bus " + std::to_string(ext) + " does not exist");
    return it->second;
  }

 private:
  std::map<long, int> index_;
};

double number_or(const CsvTable& t, std::size_t row, const char* column, double fallback) {
  return t.optional_number(row, column).value_or(fallback);
}

bool flag_or(const CsvTable& t, std::size_t row, const char* column, bool fallback) {
  return t.optional_flag(row, column).value_or(fallback);
}

Series read_profile(const fs::path& dir, const std::string& prefix, const std::string& id) {
  const std::string file = "timeseries/" + prefix + "_" + id + ".csv";
  const CsvTable t = require(dir, file);
  if (t.rows() == 0) throw LoadError(file + ": empty time series");
  std::vector<double> values(t.rows());
  long step = 1;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const long m = t.integer(r, "minute_index");
    if (r == 1) step = m;
    if (r == 0 && m != 0) throw LoadError(t.where(r) + ": minute_index must start at 0");
    if (r > 0 && (step < 1 || m != static_cast<long>(r) * step))
      throw LoadError(t.where(r) + ": minute_index must advance in uniform steps");
    values[r] = t.number(r, "value_mw");
  }
  return resample_to_minutes(values, static_cast<int>(step));
}

void read_system(const fs::path& dir, SystemConfig& s) {
  if (!fs::exists(dir / "system.csv")) return;
  const CsvTable t = CsvTable::read(dir / "system.csv");
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const std::string& key = t.text(r, "key");
    if (!set_system_key(s, key, t.number(r, "value")))
      throw LoadError(t.where(r) + ": unknown system key '" + key + "'");
  }
}

}  // namespace

GridCase load_case(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError("case directory " + dir.string() + " does not exist");
  GridCase c;
  read_system(dir, c.config);

  const CsvTable bus = require(dir, "bus.csv");
  std::vector<Bus> raw;
  for (std::size_t r = 0; r < bus.rows(); ++r) {
    Bus b;
    b.external_id = bus.integer(r, "id");
    b.area = bus.has_column("area") ? static_cast<int>(bus.integer(r, "area")) : 1;
    b.name = bus.has_column("name") ? bus.text(r, "name") : std::to_string(b.external_id);
    raw.push_back(std::move(b));
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Bus& a, const Bus& b) { return a.external_id < b.external_id; });
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i > 0 && raw[i].external_id == raw[i - 1].external_id)
      throw ValidationError("bus.csv: duplicate bus id " + std::to_string(raw[i].external_id));
    raw[i].id = static_cast<int>(i);
  }
  c.buses = std::move(raw);
  const BusMap bus_of(c.buses);

  const CsvTable br = require(dir, "branch.csv");
  for (std::size_t r = 0; r < br.rows(); ++r) {
    Line l;
    l.id = br.text(r, "id");
    l.from_bus = bus_of(br, r, "from_bus");
    l.to_bus = bus_of(br, r, "to_bus");
    l.susceptance = br.number(r, "susceptance");
    l.flow_limit = br.number(r, "flow_limit");
    c.lines.push_back(std::move(l));
  }

  const CsvTable gen = require(dir, "gen.csv");
  for (std::size_t r = 0; r < gen.rows(); ++r) {
    DispatchableGenerator g;
    g.id = gen.text(r, "id");
    g.bus = bus_of(gen, r);
    g.fuel_kind = parse_fuel_kind(gen.text(r, "fuel_kind"));
    g.cooling_kind = parse_cooling_kind(gen.text(r, "cooling_kind"));
    g.p_min = gen.number(r, "p_min");
    g.p_max = gen.number(r, "p_max");
    g.ramp_dn = gen.number(r, "ramp_dn");
    g.ramp_up = gen.number(r, "ramp_up");
    g.fuel_price = number_or(gen, r, "fuel_price", 0.0);
    g.fuel_energy_density = number_or(gen, r, "fuel_energy_density", 0.0);
    g.co2_per_mj = number_or(gen, r, "co2_per_mj", 0.0);
    const auto hr_f = gen.optional_number(r, "heat_rate_fixed");
    const auto hr_l = gen.optional_number(r, "heat_rate_linear");
    const auto hr_q = gen.optional_number(r, "heat_rate_quadratic");
    if (hr_f || hr_l || hr_q) {
      // Heat input curve in MJ/h, MJ/MWh, MJ/MW^2h priced at the fuel price.
      g.cost_fixed = g.fuel_price * hr_f.value_or(0.0);
      g.cost_linear = g.fuel_price * hr_l.value_or(0.0);
      g.cost_quadratic = g.fuel_price * hr_q.value_or(0.0);
    } else {
      g.cost_fixed = number_or(gen, r, "cost_fixed", 0.0);
      g.cost_linear = number_or(gen, r, "cost_linear", 0.0);
      g.cost_quadratic = number_or(gen, r, "cost_quadratic", 0.0);
    }
    g.cost_startup = number_or(gen, r, "cost_startup", 0.0);
    g.cost_shutdown = number_or(gen, r, "cost_shutdown", 0.0);
    g.eta_other = number_or(gen, r, "eta_other", g.fuel_kind == FuelKind::nuclear ? 0.0 : 0.2);
    g.agc_capable = flag_or(gen, r, "agc_capable", false);
    g.initial_on = flag_or(gen, r, "initial_on", false);
    g.initial_power = number_or(gen, r, "initial_power", 0.0);
    if (!(g.p_min <= g.p_max))
      throw ValidationError(gen.where(r) + ": generator " + g.id + " has p_min > p_max");
    c.generators.push_back(std::move(g));
  }

  const CsvTable st = require(dir, "storage.csv");
  for (std::size_t r = 0; r < st.rows(); ++r) {
    StorageUnit s;
    s.id = st.text(r, "id");
    s.bus = bus_of(st, r);
    s.discharge_min = st.number(r, "discharge_min");
    s.discharge_max = st.number(r, "discharge_max");
    s.charge_min = st.number(r, "charge_min");
    s.charge_max = st.number(r, "charge_max");
    s.energy_min = st.number(r, "energy_min");
    s.energy_max = st.number(r, "energy_max");
    s.efficiency = st.number(r, "efficiency");
    s.initial_energy = st.number(r, "initial_energy");
    s.initial_discharging = flag_or(st, r, "initial_discharging", false);
    s.initial_charging = flag_or(st, r, "initial_charging", false);
    s.cost_energy = number_or(st, r, "cost_energy", 0.0);
    s.cost_discharge = number_or(st, r, "cost_discharge", 0.0);
    s.cost_charge = number_or(st, r, "cost_charge", 0.0);
    c.storage.push_back(std::move(s));
  }

  const CsvTable dr = require(dir, "dr.csv");
  for (std::size_t r = 0; r < dr.rows(); ++r) {
    DemandResponseUnit d;
    d.id = dr.text(r, "id");
    d.bus = bus_of(dr, r);
    d.p_min = dr.number(r, "p_min");
    d.p_max = dr.number(r, "p_max");
    d.ramp_dn = dr.number(r, "ramp_dn");
    d.ramp_up = dr.number(r, "ramp_up");
    d.cost_fixed = number_or(dr, r, "cost_fixed", 0.0);
    d.cost_linear = number_or(dr, r, "cost_linear", 0.0);
    d.cost_quadratic = number_or(dr, r, "cost_quadratic", 0.0);
    d.cost_startup = number_or(dr, r, "cost_startup", 0.0);
    d.cost_shutdown = number_or(dr, r, "cost_shutdown", 0.0);
    d.is_water_facility = flag_or(dr, r, "is_water_facility", false);
    d.enabled = flag_or(dr, r, "enabled", true);
    d.initial_on = flag_or(dr, r, "initial_on", false);
    d.initial_power = number_or(dr, r, "initial_power", 0.0);
    c.dr_units.push_back(std::move(d));
  }

  if (fs::exists(dir / "ver.csv")) {
    const CsvTable ver = CsvTable::read(dir / "ver.csv");
    for (std::size_t r = 0; r < ver.rows(); ++r) {
      VariableResource v;
      v.id = ver.text(r, "id");
      v.bus = bus_of(ver, r);
      v.kind = parse_ver_kind(ver.text(r, "kind"));
      v.capacity = ver.number(r, "capacity");
      v.curtailable_fraction = number_or(ver, r, "curtailable_fraction", 1.0);
      v.curtailment_cost = number_or(ver, r, "curtailment_cost", 0.0);
      // Default: full range within one SCED step.
      const double full = v.capacity / c.config.t_m;
      v.ramp_dn = number_or(ver, r, "ramp_dn", -full);
      v.ramp_up = number_or(ver, r, "ramp_up", full);
      v.curtailment_enabled = flag_or(ver, r, "curtailment_enabled", true);
      v.actual_profile = read_profile(dir, "ver", v.id);
      c.var_resources.push_back(std::move(v));
    }
  }

  const CsvTable ld = require(dir, "load.csv");
  for (std::size_t r = 0; r < ld.rows(); ++r) {
    LoadZone z;
    z.id = ld.text(r, "id");
    z.bus = bus_of(ld, r);
    z.curtailable_fraction = number_or(ld, r, "curtailable_fraction", 0.0);
    z.curtailment_cost = number_or(ld, r, "curtailment_cost", 0.0);
    z.water_supply_fraction = number_or(ld, r, "water_supply_fraction", 0.0);
    z.wastewater_fraction = number_or(ld, r, "wastewater_fraction", 0.0);
    z.demand_profile = read_profile(dir, "load", z.id);
    c.load_zones.push_back(std::move(z));
  }

  validate_case(c);
  c.incidence = build_incidence(c);
  return c;
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw LoadError("cannot write " + p.string());
  return out;
}

std::string f(double v) { return format_double(v); }
std::string b(bool v) { return v ? "1" : "0"; }

void write_profile(const fs::path& dir, const std::string& prefix, const std::string& id, const Series& s) {
  std::ofstream out = open_out(dir / "timeseries" / (prefix + "_" + id + ".csv"));
  out << "minute_index,value_mw\n";
  for (std::size_t m = 0; m < s.size(); ++m) out << m << ',' << f(s[m]) << '\n';
}

}  // namespace

void export_case(const GridCase& c, const fs::path& dir) {
  fs::create_directories(dir / "timeseries");
  const auto ext = [&](int bus) { return std::to_string(c.buses[bus].external_id); };
  {
    std::ofstream out = open_out(dir / "bus.csv");
    write_csv_row(out, {"id", "area", "name"});
    for (const Bus& x : c.buses) write_csv_row(out, {std::to_string(x.external_id), std::to_string(x.area), x.name});
  }
  {
    std::ofstream out = open_out(dir / "branch.csv");
    write_csv_row(out, {"id", "from_bus", "to_bus", "susceptance", "flow_limit"});
    for (const Line& l : c.lines)
      write_csv_row(out, {l.id, ext(l.from_bus), ext(l.to_bus), f(l.susceptance), f(l.flow_limit)});
  }
  {
    std::ofstream out = open_out(dir / "gen.csv");
    write_csv_row(out, {"id", "bus", "fuel_kind", "cooling_kind", "p_min", "p_max", "ramp_dn", "ramp_up",
                        "cost_fixed", "cost_linear", "cost_quadratic", "cost_startup", "cost_shutdown",
                        "fuel_price", "fuel_energy_density", "co2_per_mj", "eta_other", "agc_capable",
                        "initial_on", "initial_power"});
    for (const DispatchableGenerator& g : c.generators)
      write_csv_row(out, {g.id, ext(g.bus), to_string(g.fuel_kind), to_string(g.cooling_kind), f(g.p_min),
                          f(g.p_max), f(g.ramp_dn), f(g.ramp_up), f(g.cost_fixed), f(g.cost_linear),
                          f(g.cost_quadratic), f(g.cost_startup), f(g.cost_shutdown), f(g.fuel_price),
                          f(g.fuel_energy_density), f(g.co2_per_mj), f(g.eta_other), b(g.agc_capable),
                          b(g.initial_on), f(g.initial_power)});
  }
  {
    std::ofstream out = open_out(dir / "storage.csv");
    write_csv_row(out, {"id", "bus", "discharge_min", "discharge_max", "charge_min", "charge_max", "energy_min",
                        "energy_max", "efficiency", "initial_energy", "initial_discharging", "initial_charging",
                        "cost_energy", "cost_discharge", "cost_charge"});
    for (const StorageUnit& s : c.storage)
      write_csv_row(out, {s.id, ext(s.bus), f(s.discharge_min), f(s.discharge_max), f(s.charge_min),
                          f(s.charge_max), f(s.energy_min), f(s.energy_max), f(s.efficiency), f(s.initial_energy),
                          b(s.initial_discharging), b(s.initial_charging), f(s.cost_energy), f(s.cost_discharge),
                          f(s.cost_charge)});
  }
  {
    std::ofstream out = open_out(dir / "dr.csv");
    write_csv_row(out, {"id", "bus", "p_min", "p_max", "ramp_dn", "ramp_up", "cost_fixed", "cost_linear",
                        "cost_quadratic", "cost_startup", "cost_shutdown", "is_water_facility", "enabled",
                        "initial_on", "initial_power"});
    for (const DemandResponseUnit& d : c.dr_units)
      write_csv_row(out, {d.id, ext(d.bus), f(d.p_min), f(d.p_max), f(d.ramp_dn), f(d.ramp_up), f(d.cost_fixed),
                          f(d.cost_linear), f(d.cost_quadratic), f(d.cost_startup), f(d.cost_shutdown),
                          b(d.is_water_facility), b(d.enabled), b(d.initial_on), f(d.initial_power)});
  }
  {
    std::ofstream out = open_out(dir / "ver.csv");
    write_csv_row(out, {"id", "bus", "kind", "capacity", "curtailable_fraction", "curtailment_cost", "ramp_dn",
                        "ramp_up", "curtailment_enabled"});
    for (const VariableResource& v : c.var_resources) {
      write_csv_row(out, {v.id, ext(v.bus), to_string(v.kind), f(v.capacity), f(v.curtailable_fraction),
                          f(v.curtailment_cost), f(v.ramp_dn), f(v.ramp_up), b(v.curtailment_enabled)});
      write_profile(dir, "ver", v.id, v.actual_profile);
    }
  }
  {
    std::ofstream out = open_out(dir / "load.csv");
    write_csv_row(out, {"id", "bus", "curtailable_fraction", "curtailment_cost", "water_supply_fraction",
                        "wastewater_fraction"});
    for (const LoadZone& z : c.load_zones) {
      write_csv_row(out, {z.id, ext(z.bus), f(z.curtailable_fraction), f(z.curtailment_cost),
                          f(z.water_supply_fraction), f(z.wastewater_fraction)});
      write_profile(dir, "load", z.id, z.demand_profile);
    }
  }
  {
    const SystemConfig& s = c.config;
    std::ofstream out = open_out(dir / "system.csv");
    write_csv_row(out, {"key", "value"});
    const std::pair<const char*, double> rows[] = {
        {"T_h", s.t_h}, {"T_m", static_cast<double>(s.t_m)}, {"gamma", s.gamma}, {"p_res", s.p_res},
        {"r_res", s.r_res}, {"penalty_cost", s.penalty_cost}, {"penalty_bound", s.penalty_bound},
        {"regulation_capacity", s.regulation_capacity}, {"c_p_water", s.water.c_p_water}, {"h_fg", s.water.h_fg},
        {"delta_t_cond", s.water.delta_t_cond}, {"n_cc", s.water.n_cc}, {"k_sens", s.water.k_sens},
        {"k_bd", s.water.k_bd}, {"rho_water", s.water.rho_water}};
    for (const auto& [k, v] : rows) write_csv_row(out, {k, f(v)});
  }
}

}  // namespace ewn
