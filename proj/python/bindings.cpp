#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "ewn/config.hpp"
#include "ewn/error.hpp"
#include "ewn/grid_model.hpp"
#include "ewn/metrics.hpp"
#include "ewn/regulation.hpp"
#include "ewn/report.hpp"
#include "ewn/scenario.hpp"
#include "ewn/water_energy.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

py::dict metrics_dict(const ewn::MetricsReport& m) {
  py::dict d;
  d["days"] = m.days;
  d["steps"] = m.steps;
  d["minutes"] = m.minutes;
  d["day_ahead_cost"] = m.day_ahead_cost;
  d["real_time_cost"] = m.real_time_cost;
  d["fuel_kt"] = m.fuel_kt;
  d["co2_kt"] = m.co2_kt;
  d["fuel_total_kt"] = m.fuel_total_kt;
  d["co2_total_kt"] = m.co2_total_kt;
  d["withdrawal_m3"] = m.withdrawal_kg / m.rho_water;
  d["evaporation_m3"] = m.evaporation_kg / m.rho_water;
  d["consumption_m3"] = m.consumption_kg / m.rho_water;
  d["saturation"] = m.saturation;
  d["unserved_fraction"] = m.unserved_fraction;
  d["slack_mwh"] = m.slack_mwh;
  return d;
}

py::dict run(const fs::path& config_path, std::optional<fs::path> output_dir) {
  ewn::ScenarioConfig cfg = ewn::load_config(config_path);
  if (output_dir) cfg.output_dir = *output_dir;
  ewn::ScenarioResults res;
  ewn::MetricsReport m;
  {
    py::gil_scoped_release release;
    res = ewn::run_scenario(cfg);
    m = ewn::compute_metrics(res);
    ewn::export_report(res, m, ewn::scenario_dir(cfg));
  }
  py::dict d = metrics_dict(m);
  d["name"] = cfg.name;
  d["directory"] = ewn::scenario_dir(cfg);
  return d;
}

py::list compare(const fs::path& flexible, const fs::path& conventional, const fs::path& out) {
  const ewn::ComparisonReport rep =
      ewn::compare_scenarios(ewn::load_scenario(flexible), ewn::load_scenario(conventional));
  ewn::write_comparison(rep, out);
  py::list rows;
  for (const ewn::ComparisonRow& r : rep.rows) {
    py::dict d;
    d["metric"] = r.metric;
    d["unit"] = r.unit;
    d["flexible"] = r.flexible;
    d["conventional"] = r.conventional;
    d["difference"] = r.difference;
    d["percent"] = r.percent ? py::cast(*r.percent) : py::none();
    rows.append(d);
  }
  return rows;
}

py::dict validate(const fs::path& case_dir) {
  const ewn::GridCase c = ewn::load_case(case_dir);
  py::dict d;
  d["buses"] = c.buses.size();
  d["lines"] = c.lines.size();
  d["generators"] = c.generators.size();
  d["storage"] = c.storage.size();
  d["dr_units"] = c.dr_units.size();
  d["var_resources"] = c.var_resources.size();
  d["load_zones"] = c.load_zones.size();
  d["minutes"] = c.minutes();
  return d;
}

py::dict regulation(double imbalance, const std::vector<double>& headroom_up, const std::vector<double>& headroom_dn,
                    double capacity) {
  if (headroom_up.size() != headroom_dn.size()) throw ewn::DimensionError("headroom lists differ in length");
  std::vector<ewn::AgcState> fleet;
  for (std::size_t i = 0; i < headroom_up.size(); ++i)
    fleet.push_back({static_cast<int>(i), headroom_up[i], headroom_dn[i]});
  const ewn::RegulationResponse r = ewn::apply_regulation(imbalance, fleet, capacity);
  py::dict d;
  d["regulation"] = r.regulation;
  d["residual"] = r.residual;
  d["allocation"] = r.allocation;
  d["unassigned"] = r.unassigned;
  return d;
}

py::dict cooling(const std::string& cooling_kind, double thermal_loss_mj_min, double eta_other, double k_sens,
                 double n_cc, double delta_t) {
  ewn::DispatchableGenerator g;
  g.cooling_kind = ewn::parse_cooling_kind(cooling_kind);
  g.eta_other = eta_other;
  ewn::WaterParams wp;
  wp.k_sens = k_sens;
  wp.n_cc = n_cc;
  wp.delta_t_cond = delta_t;
  const ewn::CoolingFlows f = ewn::cooling_flows(g, thermal_loss_mj_min, wp);
  py::dict d;
  d["thermal_load"] = f.thermal_load;
  d["withdrawal"] = f.withdrawal;
  d["evaporation"] = f.evaporation;
  d["blowdown"] = f.blowdown;
  d["consumption"] = f.consumption;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-water nexus co-simulation core";

  auto error = py::register_exception<ewn::Error>(m, "Error");
  py::register_exception<ewn::LoadError>(m, "LoadError", error);
  auto validation = py::register_exception<ewn::ValidationError>(m, "ValidationError", error);
  py::register_exception<ewn::DimensionError>(m, "DimensionError", error);
  py::register_exception<ewn::SolverError>(m, "SolverError", error);
  py::register_exception<ewn::ParameterError>(m, "ParameterError", error);
  // Registered after its base so it is tried first.
  py::register_exception<ewn::ComparisonError>(m, "ComparisonError", validation);

  m.def("run", &run, py::arg("config"), py::arg("output_dir") = py::none(),
        "Run the scenario in a config file, write its result tree and return headline metrics.");
  m.def("compare", &compare, py::arg("flexible"), py::arg("conventional"), py::arg("out"),
        "Compare two result trees, write the comparison and return its rows.");
  m.def("validate", &validate, py::arg("case_dir"), "Load and validate a case directory; returns element counts.");
  m.def("regulation", &regulation, py::arg("imbalance"), py::arg("headroom_up"), py::arg("headroom_dn"),
        py::arg("capacity"));
  m.def("cooling", &cooling, py::arg("cooling_kind"), py::arg("thermal_loss_mj_min"), py::arg("eta_other") = 0.2,
        py::arg("k_sens") = 0.15, py::arg("n_cc") = 6.0, py::arg("delta_t") = 10.0,
        "Cooling water flows in kg/min for one unit's thermal loss in MJ/min.");
}
