#include "ewn/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ewn/error.hpp"

namespace ewn {

std::string to_string(FuelKind k) {
  switch (k) {
    case FuelKind::coal: return "coal";
    case FuelKind::natural_gas: return "natural_gas";
    case FuelKind::oil: return "oil";
    case FuelKind::nuclear: return "nuclear";
    case FuelKind::other: return "other";
  }
  return "other";
}

std::string to_string(CoolingKind k) {
  switch (k) {
    case CoolingKind::once_through: return "once_through";
    case CoolingKind::recirculating: return "recirculating";
    case CoolingKind::dry: return "dry";
    case CoolingKind::none: return "none";
  }
  return "none";
}

std::string to_string(VerKind k) {
  switch (k) {
    case VerKind::wind: return "wind";
    case VerKind::solar: return "solar";
    case VerKind::hydro_ror: return "hydro_ror";
  }
  return "wind";
}

FuelKind parse_fuel_kind(const std::string& s) {
  if (s == "coal") return FuelKind::coal;
  if (s == "natural_gas" || s == "gas") return FuelKind::natural_gas;
  if (s == "oil") return FuelKind::oil;
  if (s == "nuclear") return FuelKind::nuclear;
  if (s == "other") return FuelKind::other;
  throw LoadError("unknown fuel_kind '" + s + "'");
}

CoolingKind parse_cooling_kind(const std::string& s) {
  if (s == "once_through") return CoolingKind::once_through;
  if (s == "recirculating") return CoolingKind::recirculating;
  if (s == "dry") return CoolingKind::dry;
  if (s == "none" || s.empty()) return CoolingKind::none;
  throw LoadError("unknown cooling_kind '" + s + "'");
}

VerKind parse_ver_kind(const std::string& s) {
  if (s == "wind") return VerKind::wind;
  if (s == "solar") return VerKind::solar;
  if (s == "hydro_ror" || s == "hydro") return VerKind::hydro_ror;
  throw LoadError("unknown VER kind '" + s + "'");
}

int GridCase::minutes() const {
  if (!load_zones.empty()) return static_cast<int>(load_zones.front().demand_profile.size());
  if (!var_resources.empty()) return static_cast<int>(var_resources.front().actual_profile.size());
  return 0;
}

double GridCase::total_load(int minute) const {
  double s = 0.0;
  for (const LoadZone& z : load_zones) s += z.demand_profile[minute];
  return s;
}

bool GridCase::same_data(const GridCase& o) const {
  return buses == o.buses && lines == o.lines && generators == o.generators && storage == o.storage &&
         dr_units == o.dr_units && var_resources == o.var_resources && load_zones == o.load_zones &&
         config == o.config;
}

namespace {

template <class T>
void check_unique_ids(const std::vector<T>& items, const std::string& table) {
  std::set<std::string> seen;
  for (const T& it : items)
    if (!seen.insert(it.id).second) throw ValidationError(table + ": duplicate id '" + it.id + "'");
}

void check_bus(int bus, std::size_t n, const std::string& what) {
  if (bus < 0 || static_cast<std::size_t>(bus) >= n) throw ValidationError(what + ": references a missing bus");
}

}  // namespace

void validate_case(const GridCase& c) {
  const std::size_t nb = c.buses.size();
  if (nb == 0) throw ValidationError("bus.csv: case has no buses");
  {
    std::set<long> seen;
    for (std::size_t i = 0; i < nb; ++i) {
      if (c.buses[i].id != static_cast<int>(i)) throw ValidationError("bus ids are not dense");
      if (!seen.insert(c.buses[i].external_id).second)
        throw ValidationError("bus.csv: duplicate bus id " + std::to_string(c.buses[i].external_id));
    }
  }
  check_unique_ids(c.lines, "branch.csv");
  check_unique_ids(c.generators, "gen.csv");
  check_unique_ids(c.storage, "storage.csv");
  check_unique_ids(c.dr_units, "dr.csv");
  check_unique_ids(c.var_resources, "ver.csv");
  check_unique_ids(c.load_zones, "load.csv");

  for (const Line& l : c.lines) {
    const std::string w = "branch " + l.id;
    check_bus(l.from_bus, nb, w);
    check_bus(l.to_bus, nb, w);
    if (l.from_bus == l.to_bus) throw ValidationError(w + ": from_bus equals to_bus");
    if (!(l.flow_limit > 0)) throw ValidationError(w + ": flow_limit must be positive");
    if (!(l.susceptance > 0)) throw ValidationError(w + ": susceptance must be positive");
  }

  for (const DispatchableGenerator& g : c.generators) {
    const std::string w = "generator " + g.id;
    check_bus(g.bus, nb, w);
    if (!(0 <= g.p_min && g.p_min <= g.p_max)) throw ValidationError(w + ": requires 0 <= p_min <= p_max");
    if (!(g.ramp_dn <= 0 && 0 <= g.ramp_up)) throw ValidationError(w + ": requires ramp_dn <= 0 <= ramp_up");
    if (g.cost_quadratic < 0) throw ValidationError(w + ": cost_quadratic must be nonnegative");
    if (!(0 <= g.eta_other && g.eta_other <= 1)) throw ValidationError(w + ": eta_other must lie in [0, 1]");
    const bool burns = g.cost_fixed != 0 || g.cost_linear != 0 || g.cost_quadratic != 0;
    if (burns && !(g.fuel_energy_density > 0 && g.fuel_price > 0))
      throw ValidationError(w + ": fuel_price and fuel_energy_density must be positive for a nonzero cost curve");
    if (g.co2_per_mj < 0) throw ValidationError(w + ": co2_per_mj must be nonnegative");
    if (g.initial_on && !(g.p_min <= g.initial_power && g.initial_power <= g.p_max))
      throw ValidationError(w + ": initial_power outside [p_min, p_max] while initially on");
    if (!g.initial_on && g.initial_power != 0) throw ValidationError(w + ": initial_power must be 0 while off");
    if (c.config.penalty_cost <= g.cost_quadratic)
      throw ValidationError(w + ": penalty_cost must exceed every cost_quadratic");
  }

  for (const StorageUnit& s : c.storage) {
    const std::string w = "storage " + s.id;
    check_bus(s.bus, nb, w);
    if (!(0 <= s.discharge_min && s.discharge_min <= s.discharge_max))
      throw ValidationError(w + ": requires 0 <= discharge_min <= discharge_max");
    if (!(0 <= s.charge_min && s.charge_min <= s.charge_max))
      throw ValidationError(w + ": requires 0 <= charge_min <= charge_max");
    if (!(s.energy_min <= s.initial_energy && s.initial_energy <= s.energy_max))
      throw ValidationError(w + ": requires energy_min <= initial_energy <= energy_max");
    if (!(0 < s.efficiency && s.efficiency <= 1)) throw ValidationError(w + ": efficiency must lie in (0, 1]");
    if (s.initial_discharging && s.initial_charging)
      throw ValidationError(w + ": at most one of initial_discharging and initial_charging may be set");
  }

  for (const DemandResponseUnit& d : c.dr_units) {
    const std::string w = "dr " + d.id;
    check_bus(d.bus, nb, w);
    if (!(0 <= d.p_min && d.p_min <= d.p_max)) throw ValidationError(w + ": requires 0 <= p_min <= p_max");
    if (!(d.ramp_dn <= 0 && 0 <= d.ramp_up)) throw ValidationError(w + ": requires ramp_dn <= 0 <= ramp_up");
    if (d.cost_quadratic < 0) throw ValidationError(w + ": cost_quadratic must be nonnegative");
    if (d.initial_on && !(d.p_min <= d.initial_power && d.initial_power <= d.p_max))
      throw ValidationError(w + ": initial_power outside [p_min, p_max] while initially on");
    if (!d.initial_on && d.initial_power != 0) throw ValidationError(w + ": initial_power must be 0 while off");
  }

  const int minutes = c.minutes();
  for (const VariableResource& v : c.var_resources) {
    const std::string w = "ver " + v.id;
    check_bus(v.bus, nb, w);
    if (!(0 <= v.curtailable_fraction && v.curtailable_fraction <= 1))
      throw ValidationError(w + ": curtailable_fraction must lie in [0, 1]");
    if (!(v.ramp_dn <= 0 && 0 <= v.ramp_up)) throw ValidationError(w + ": requires ramp_dn <= 0 <= ramp_up");
    if (static_cast<int>(v.actual_profile.size()) != minutes)
      throw DimensionError(w + ": profile length " + std::to_string(v.actual_profile.size()) + " differs from " +
                           std::to_string(minutes));
    for (double p : v.actual_profile)
      if (!(p >= 0 && p <= v.capacity * (1 + 1e-12)))
        throw ValidationError(w + ": profile value outside [0, capacity]");
  }

  for (const LoadZone& z : c.load_zones) {
    const std::string w = "load " + z.id;
    check_bus(z.bus, nb, w);
    if (!(0 <= z.curtailable_fraction && z.curtailable_fraction <= 1))
      throw ValidationError(w + ": curtailable_fraction must lie in [0, 1]");
    if (!(z.water_supply_fraction >= 0 && z.wastewater_fraction >= 0 &&
          z.water_supply_fraction + z.wastewater_fraction <= 1))
      throw ValidationError(w + ": water fractions must be nonnegative and sum to at most 1");
    if (static_cast<int>(z.demand_profile.size()) != minutes)
      throw DimensionError(w + ": profile length " + std::to_string(z.demand_profile.size()) + " differs from " +
                           std::to_string(minutes));
    for (double p : z.demand_profile)
      if (!(p >= 0)) throw ValidationError(w + ": negative demand");
  }

  const SystemConfig& s = c.config;
  if (!(s.t_h > 0) || s.t_m <= 0) throw ValidationError("system: T_h and T_m must be positive");
  const double per_hour = 60.0 * s.t_h;
  if (std::abs(per_hour - std::round(per_hour)) > 1e-9 || static_cast<long>(std::round(per_hour)) % s.t_m != 0)
    throw ValidationError("system: T_h * 60 must be divisible by T_m");
  if (s.gamma < 0) throw ValidationError("system: gamma must be nonnegative");
  if (s.p_res < 0 || s.r_res < 0) throw ValidationError("system: reserve requirements must be nonnegative");
  if (!(s.penalty_bound > 0)) throw ValidationError("system: penalty_bound must be positive");
  if (s.regulation_capacity < 0) throw ValidationError("system: regulation_capacity must be nonnegative");
  const WaterParams& wp = s.water;
  if (!(wp.n_cc > 1)) throw ValidationError("system: n_cc must exceed 1");
  if (!(0 <= wp.k_sens && wp.k_sens < 1)) throw ValidationError("system: k_sens must lie in [0, 1)");
  if (!(0 <= wp.k_bd && wp.k_bd <= 1)) throw ValidationError("system: k_bd must lie in [0, 1]");
  if (!(wp.c_p_water > 0 && wp.h_fg > 0 && wp.delta_t_cond > 0 && wp.rho_water > 0))
    throw ValidationError("system: water parameters must be positive");
}

NetworkIncidence build_incidence(const GridCase& c) {
  const int nb = static_cast<int>(c.buses.size());
  auto resource_map = [nb](const auto& items) {
    Eigen::SparseMatrix<double> a(nb, static_cast<int>(items.size()));
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t r = 0; r < items.size(); ++r) trip.emplace_back(items[r].bus, static_cast<int>(r), 1.0);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
  };
  NetworkIncidence inc;
  inc.gen = resource_map(c.generators);
  inc.storage = resource_map(c.storage);
  inc.dr = resource_map(c.dr_units);
  inc.ver = resource_map(c.var_resources);
  inc.load = resource_map(c.load_zones);
  inc.branch.resize(nb, static_cast<int>(c.lines.size()));
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t l = 0; l < c.lines.size(); ++l) {
    trip.emplace_back(c.lines[l].from_bus, static_cast<int>(l), 1.0);
    trip.emplace_back(c.lines[l].to_bus, static_cast<int>(l), -1.0);
  }
  inc.branch.setFromTriplets(trip.begin(), trip.end());
  return inc;
}

Series resample_to_minutes(const std::vector<double>& samples, int step) {
  if (step < 1) throw ParameterError("resampling step must be at least 1 minute");
  Series out;
  out.reserve(samples.size() * step);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = samples[i];
    const double b = i + 1 < samples.size() ? samples[i + 1] : a;
    for (int k = 0; k < step; ++k) out.push_back(k == 0 ? a : a + (b - a) * k / step);
  }
  return out;
}

bool set_system_key(SystemConfig& s, const std::string& key, double v) {
  if (key == "T_h") s.t_h = v;
  else if (key == "T_m") s.t_m = static_cast<int>(v);
  else if (key == "gamma") s.gamma = v;
  else if (key == "p_res") s.p_res = v;
  else if (key == "r_res") s.r_res = v;
  else if (key == "penalty_cost") s.penalty_cost = v;
  else if (key == "penalty_bound") s.penalty_bound = v;
  else if (key == "regulation_capacity") s.regulation_capacity = v;
  else if (key == "c_p_water") s.water.c_p_water = v;
  else if (key == "h_fg") s.water.h_fg = v;
  else if (key == "delta_t_cond") s.water.delta_t_cond = v;
  else if (key == "n_cc") s.water.n_cc = v;
  else if (key == "k_sens") s.water.k_sens = v;
  else if (key == "k_bd") s.water.k_bd = v;
  else if (key == "rho_water") s.water.rho_water = v;
  else return false;
  return true;
}

}  // namespace ewn
