#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace ewn {

/// Minute-resolution MW series.
using Series = std::vector<double>;

enum class FuelKind { coal, natural_gas, oil, nuclear, other };
enum class CoolingKind { once_through, recirculating, dry, none };
enum class VerKind { wind, solar, hydro_ror };

std::string to_string(FuelKind k);
std::string to_string(CoolingKind k);
std::string to_string(VerKind k);
FuelKind parse_fuel_kind(const std::string& s);
CoolingKind parse_cooling_kind(const std::string& s);
VerKind parse_ver_kind(const std::string& s);

// Every `bus` field below is a dense bus index in [0, buses.size()).

struct Bus {
  int id = 0;           // dense index
  long external_id = 0;  // id as written in bus.csv
  int area = 0;
  std::string name;
  bool operator==(const Bus&) const = default;
};

struct Line {
  std::string id;
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 1.0;  // per unit
  double flow_limit = 0.0;   // MW
  bool operator==(const Line&) const = default;
};

struct DispatchableGenerator {
  std::string id;
  int bus = 0;
  FuelKind fuel_kind = FuelKind::natural_gas;
  CoolingKind cooling_kind = CoolingKind::none;
  double p_min = 0.0, p_max = 0.0;     // MW
  double ramp_dn = 0.0, ramp_up = 0.0;  // MW/min, ramp_dn <= 0
  double cost_fixed = 0.0;             // $/h
  double cost_linear = 0.0;            // $/MWh
  double cost_quadratic = 0.0;         // $/MW^2h
  double cost_startup = 0.0;           // $
  double cost_shutdown = 0.0;          // $
  double fuel_price = 0.0;             // $/MJ
  double fuel_energy_density = 0.0;    // MJ/kg
  double co2_per_mj = 0.0;             // kg/MJ
  double eta_other = 0.2;              // share of thermal loss leaving by other routes
  bool agc_capable = false;
  bool initial_on = false;
  double initial_power = 0.0;          // MW
  bool operator==(const DispatchableGenerator&) const = default;
};

struct StorageUnit {
  std::string id;
  int bus = 0;
  double discharge_min = 0.0, discharge_max = 0.0;  // MW
  double charge_min = 0.0, charge_max = 0.0;        // MW
  double energy_min = 0.0, energy_max = 0.0;        // MWh
  double efficiency = 1.0;
  double initial_energy = 0.0;                      // MWh
  bool initial_discharging = false;
  bool initial_charging = false;
  double cost_energy = 0.0;     // $/MWh held
  double cost_discharge = 0.0;  // $/MW
  double cost_charge = 0.0;     // $/MW
  bool operator==(const StorageUnit&) const = default;
};

struct DemandResponseUnit {
  std::string id;
  int bus = 0;
  double p_min = 0.0, p_max = 0.0;     // MW of demand reduction
  double ramp_dn = 0.0, ramp_up = 0.0;  // MW/min
  double cost_fixed = 0.0, cost_linear = 0.0, cost_quadratic = 0.0;
  double cost_startup = 0.0, cost_shutdown = 0.0;
  bool is_water_facility = false;
  bool enabled = true;
  bool initial_on = false;
  double initial_power = 0.0;
  bool operator==(const DemandResponseUnit&) const = default;
};

struct VariableResource {
  std::string id;
  int bus = 0;
  VerKind kind = VerKind::wind;
  double capacity = 0.0;               // MW
  double curtailable_fraction = 1.0;   // d
  double curtailment_cost = 0.0;       // $/MWh
  double ramp_dn = 0.0, ramp_up = 0.0;  // MW/min
  bool curtailment_enabled = true;
  Series actual_profile;
  bool operator==(const VariableResource&) const = default;
};

struct LoadZone {
  std::string id;
  int bus = 0;
  double curtailable_fraction = 0.0;  // d_L
  double curtailment_cost = 0.0;      // C_L, $/MWh
  double water_supply_fraction = 0.0;
  double wastewater_fraction = 0.0;
  Series demand_profile;
  bool operator==(const LoadZone&) const = default;
};

struct WaterParams {
  double c_p_water = 4.142;    // MJ/(kg K), literal table value
  double h_fg = 2.54;          // MJ/kg
  double delta_t_cond = 10.0;  // K
  double n_cc = 6.0;
  double k_sens = 0.15;
  double k_bd = 1.0;
  double rho_water = 998.0;    // kg/m^3
  bool operator==(const WaterParams&) const = default;
};

struct SystemConfig {
  double t_h = 1.0;              // hours per SCUC period
  int t_m = 5;                   // minutes per SCED step
  double gamma = 0.0;
  double p_res = 0.0;            // MW
  double r_res = 0.0;            // MW/min
  double penalty_cost = 1000.0;  // $/MW^2h
  double penalty_bound = 1e4;    // MW, bound on each nodal penalty variable
  double regulation_capacity = 40.0;  // MW
  WaterParams water;
  bool operator==(const SystemConfig&) const = default;
};

/// Sets the field named by a system.csv key; false for an unknown key.
bool set_system_key(SystemConfig& config, const std::string& key, double value);

/// Resource-to-bus maps (0/1) and the signed line-to-bus map.
struct NetworkIncidence {
  Eigen::SparseMatrix<double> gen, storage, dr, ver, load;  // buses x resources
  Eigen::SparseMatrix<double> branch;                        // buses x lines, +1 at from, -1 at to
};

struct GridCase {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<DispatchableGenerator> generators;
  std::vector<StorageUnit> storage;
  std::vector<DemandResponseUnit> dr_units;
  std::vector<VariableResource> var_resources;
  std::vector<LoadZone> load_zones;
  SystemConfig config;
  NetworkIncidence incidence;

  /// Minutes covered by every profile.
  int minutes() const;
  /// Total demand at minute t, MW.
  double total_load(int minute) const;

  /// Field-for-field equality; the incidence is derived data and is skipped.
  bool same_data(const GridCase& other) const;
};

/// Reads bus, branch, gen, storage, dr, load, ver CSVs, optional system.csv
/// and timeseries/. Profiles are resampled to 1-minute resolution.
GridCase load_case(const std::filesystem::path& case_dir);

/// Writes a case directory that load_case reads back to an equal case.
void export_case(const GridCase& c, const std::filesystem::path& case_dir);

/// Throws ValidationError naming the offending record.
void validate_case(const GridCase& c);

NetworkIncidence build_incidence(const GridCase& c);

/// Expands samples taken every `step` minutes into a 1-minute series of
/// length samples * step by linear interpolation, holding the last sample.
Series resample_to_minutes(const std::vector<double>& samples, int step);

}  // namespace ewn
