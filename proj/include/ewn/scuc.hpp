#pragma once

#include <string>
#include <vector>

#include "ewn/error.hpp"
#include "ewn/grid_model.hpp"
#include "ewn/opt/solvers.hpp"

namespace ewn {

/// [resource][period]
using Grid2 = std::vector<std::vector<double>>;

struct FlexibilityFlags {
  bool hydro_curtailable = true;
  bool water_dr_enabled = true;

  static FlexibilityFlags flexible() { return {true, true}; }
  static FlexibilityFlags conventional() { return {false, false}; }
};

/// Conditions carried from the last period of one day into the next.
struct ChainedState {
  std::vector<bool> gen_on;
  std::vector<double> gen_power;
  std::vector<bool> dr_on;
  std::vector<double> dr_power;
  std::vector<double> storage_energy;
  std::vector<bool> storage_discharging;
  std::vector<bool> storage_charging;
  /// Delivered VER output of the previous period; empty on the first day.
  std::vector<double> ver_delivered;

  static ChainedState from_case(const GridCase& c);
  bool operator==(const ChainedState&) const = default;
};

/// One value per period for every VER and load zone, in case order.
struct ScucForecast {
  std::vector<Series> ver;
  std::vector<Series> load;
};

struct ScucOptions {
  opt::MipOptions mip;
  int periods = 24;
};

/// Which resources take part, derived from the case and the flags.
struct Participation {
  std::vector<bool> dr_active;
  std::vector<bool> ver_curtailable;

  static Participation from(const GridCase& c, const FlexibilityFlags& flex);
};

struct DayAheadSchedule {
  int periods = 0;
  double t_h = 1.0;
  Grid2 gen_on, gen_startup, gen_shutdown, gen_power;
  Grid2 dr_on, dr_startup, dr_shutdown, dr_power;
  Grid2 storage_discharge, storage_charge, storage_energy, storage_discharging, storage_charging;
  Grid2 ver_curtailment, ver_forecast;
  Grid2 ver_delivered;  // forecast * (1 - w d)
  Grid2 load_curtailment, load_forecast;
  Grid2 penalty;  // per bus
  Grid2 flow;     // per line
  double objective = 0.0;
  double mip_gap = 0.0;
  long nodes = 0;
  double wall_time = 0.0;
  opt::SolveStatus status = opt::SolveStatus::optimal;
  Participation participation;
  ChainedState initial;

  ChainedState final_state() const;
};

struct ReserveMargins {
  double lfr_up = 0.0, lfr_dn = 0.0;    // MW
  double ramp_up = 0.0, ramp_dn = 0.0;  // MW/min
};

struct InfeasibleRow {
  std::string family;
  int period = -1;
  double violation = 0.0;
};

/// The SCUC has no feasible commitment. `rows` lists the constraints an
/// elastic relaxation had to violate.
class InfeasibleScheduleError : public SolverError {
 public:
  InfeasibleScheduleError(const std::string& what, std::vector<InfeasibleRow> rows)
      : SolverError(what), rows_(std::move(rows)) {}
  const std::vector<InfeasibleRow>& rows() const { return rows_; }

 private:
  std::vector<InfeasibleRow> rows_;
};

/// Variable positions inside the assembled program; -1 marks an absent
/// variable (inactive resource or fixed curtailment).
struct ScucIndex {
  std::vector<std::vector<int>> gen_on, gen_startup, gen_shutdown, gen_power;
  std::vector<std::vector<int>> dr_on, dr_startup, dr_shutdown, dr_power;
  std::vector<std::vector<int>> st_dis, st_ch, st_energy, st_dis_on, st_ch_on;
  std::vector<std::vector<int>> ver_w, load_w, penalty, flow;
};

struct ScucModel {
  opt::MathProgram program;
  ScucIndex index;
  Participation participation;
};

ScucModel build_scuc_model(const GridCase& c, const ScucForecast& forecast, const FlexibilityFlags& flex,
                           const ChainedState& initial, int periods = 24);

opt::MathProgram build_scuc(const GridCase& c, const ScucForecast& forecast, const FlexibilityFlags& flex,
                            const ChainedState& initial, int periods = 24);

/// Throws InfeasibleScheduleError when no commitment satisfies the
/// reserve and logical constraints.
DayAheadSchedule run_scuc(const GridCase& c, const ScucForecast& forecast, const FlexibilityFlags& flex,
                          const ChainedState& initial, const ScucOptions& options = {});

/// Fills a schedule from a solution vector of the model's program.
DayAheadSchedule extract_schedule(const GridCase& c, const ScucModel& model, const ScucForecast& forecast,
                                  const ChainedState& initial, const std::vector<double>& x);

std::vector<ReserveMargins> compute_reserve_margins(const DayAheadSchedule& s, const GridCase& c);

}  // namespace ewn
