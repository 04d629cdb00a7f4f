#pragma once

#include <map>
#include <string>
#include <vector>

#include "ewn/grid_model.hpp"

namespace ewn {

struct ScenarioResults;

/// counts[i] holds samples in [edges[i], edges[i+1]); the last bin is
/// closed on the right.
struct Histogram {
  std::vector<double> edges;
  std::vector<long> counts;
};

/// `bins` equal-width bins over [lo, hi]. A degenerate range widens to
/// [lo - 0.5, lo + 0.5]. Samples outside the range are dropped.
Histogram histogram(const std::vector<double>& samples, int bins, double lo, double hi);
/// Bins over the observed range of `samples`.
Histogram histogram(const std::vector<double>& samples, int bins);

struct DurationCurve {
  std::vector<double> fraction;  // (i + 1) / n, in (0, 1]
  std::vector<double> value;     // nonincreasing
};

/// Throws ParameterError on an empty series.
DurationCurve duration_curve(const std::vector<double>& series);

/// Share of samples with |x| at the capacity, within `tol`.
double saturation_fraction(const std::vector<double>& regulation, double capacity, double tol = 1e-9);

struct CurtailmentStats {
  double curtailable_gwh = 0.0;  // available energy of curtailable resources
  double curtailed_gwh = 0.0;
  double percent_energy = 0.0;
  double percent_time = 0.0;     // SCED steps curtailing more than 1e-6 MW
  double max_mw = 0.0;
};

struct MetricsReport {
  int days = 0;
  long steps = 0;
  long minutes = 0;
  double regulation_capacity = 0.0;
  double rho_water = 998.0;

  std::vector<double> day_ahead_cost_by_day;
  double day_ahead_cost = 0.0;  // sum of SCUC objectives
  double real_time_cost = 0.0;  // sum of SCED objectives

  std::map<std::string, double> fuel_kt, co2_kt;  // by fuel kind
  double fuel_total_kt = 0.0, co2_total_kt = 0.0;
  double withdrawal_kg = 0.0, evaporation_kg = 0.0, blowdown_kg = 0.0, consumption_kg = 0.0;
  double renewable_mwh = 0.0, water_supply_mwh = 0.0, wastewater_mwh = 0.0, end_use_mwh = 0.0;

  std::map<std::string, CurtailmentStats> curtailment;  // wind, solar, hydro, load

  double saturation = 0.0, saturation_up = 0.0, saturation_dn = 0.0;
  double unserved_fraction = 0.0;  // minutes with a nonzero slack
  double max_abs_slack_mw = 0.0;
  double slack_mwh = 0.0;          // sum of |slack| / 60
  long flow_violation_minutes = 0;
  double net_load_negative_percent = 0.0;

  // Series behind the histograms and duration curve.
  std::vector<double> regulation;                     // per minute
  std::vector<double> lfr_up, lfr_dn, ramp_up, ramp_dn;  // per SCED step, held from the SCUC hour
  std::vector<double> withdrawal, evaporation;        // kg/min, per minute
  std::vector<double> net_load;                       // MW, per minute
};

MetricsReport compute_metrics(const ScenarioResults& results);

/// Names of the series that get histograms, paired with accessors.
const std::vector<std::string>& histogram_series_names();
const std::vector<double>& histogram_series(const MetricsReport& m, const std::string& name);

}  // namespace ewn
