#include <doctest.h>

#include <cmath>
#include <random>

#include "ewn/error.hpp"
#include "ewn/forecast.hpp"
#include "ewn/scuc.hpp"
#include "support/cases.hpp"
#include "support/replay.hpp"
#include "support/uc_oracle.hpp"

using namespace ewn;

namespace {

// Hourly block means of the first `periods` hours of each actual profile.
ScucForecast perfect_forecast(const GridCase& c, int periods = 24) {
  ScucForecast f;
  auto head = [periods](const Series& s) {
    return block_average(Series(s.begin(), s.begin() + 60 * periods), 60);
  };
  for (const auto& v : c.var_resources) f.ver.push_back(head(v.actual_profile));
  for (const auto& z : c.load_zones) f.load.push_back(head(z.demand_profile));
  return f;
}

GridCase single_unit(double load) {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 10, 100, 5, 20, 0.01, 100));
  c.generators[0].initial_on = true;
  c.generators[0].initial_power = load;
  c.load_zones.push_back(testing::zone("Z", 0, Series(1440, load)));
  return testing::finish(c);
}

opt::MipOptions exact_mip() {
  opt::MipOptions m;
  m.gap_limit = 1e-9;
  return m;
}

double max_abs(const Grid2& g) {
  double m = 0.0;
  for (const auto& row : g)
    for (double x : row) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("run_scuc: one unit serving a flat 50 MW load stays on at 50 MW") {
  const GridCase c = single_unit(50.0);
  const DayAheadSchedule s = run_scuc(c, perfect_forecast(c), FlexibilityFlags::flexible(),
                                      ChainedState::from_case(c));
  for (int t = 0; t < 24; ++t) {
    CHECK(s.gen_on[0][t] == 1.0);
    CHECK(s.gen_power[0][t] == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(s.penalty[0][t] == doctest::Approx(0.0));
  }
}

TEST_CASE("run_scuc: lossless storage follows the state equation exactly") {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 0, 200, 10, 20, 0.05));
  c.generators[0].initial_on = true;
  c.generators[0].initial_power = 60;
  StorageUnit st;
  st.id = "S";
  st.discharge_max = st.charge_max = 25;
  st.energy_max = 80;
  st.initial_energy = 40;
  c.storage.push_back(st);
  Series load;
  for (int m = 0; m < 1440; ++m) load.push_back(m < 720 ? 30.0 : 120.0);
  c.load_zones.push_back(testing::zone("Z", 0, load));
  c = testing::finish(c);
  const DayAheadSchedule s = run_scuc(c, perfect_forecast(c), FlexibilityFlags::flexible(),
                                      ChainedState::from_case(c));
  double e_prev = st.initial_energy, moved = 0.0;
  for (int t = 0; t < 24; ++t) {
    const double e = e_prev + (s.storage_charge[0][t] - s.storage_discharge[0][t]) * s.t_h;
    CHECK(s.storage_energy[0][t] == doctest::Approx(e).epsilon(1e-9));
    CHECK(s.storage_discharging[0][t] + s.storage_charging[0][t] <= 1.0);
    moved += s.storage_charge[0][t] + s.storage_discharge[0][t];
    e_prev = s.storage_energy[0][t];
  }
  // The quadratic cost rewards shifting energy from the heavy half of the day.
  CHECK(moved > 1.0);
}

TEST_CASE("run_scuc: optimum equals brute-force commitment enumeration on the 2-unit, 4-period toy") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 4; ++trial) {
    const testing::UcInstance in = testing::random_uc_instance(rng, 2, 4);
    ScucOptions opts;
    opts.mip = exact_mip();
    opts.periods = 4;
    const DayAheadSchedule s = run_scuc(in.grid, in.forecast, FlexibilityFlags::flexible(), in.initial, opts);
    const testing::EnumerationResult e = testing::enumerate_commitments(in, FlexibilityFlags::flexible(),
                                                                        opts.mip.segments);
    CHECK(e.patterns == 256);
    CHECK_MESSAGE(std::abs(s.objective - e.best) <= 1e-6 * std::max(1.0, std::abs(e.best)),
                  "trial " << trial << ": solver " << s.objective << " enumeration " << e.best);
  }
}

TEST_CASE("run_scuc: a load-following requirement above the fleet headroom is reported as infeasible") {
  GridCase c = single_unit(50.0);
  c.config.p_res = 500.0;
  const ScucForecast f = perfect_forecast(c);
  try {
    run_scuc(c, f, FlexibilityFlags::flexible(), ChainedState::from_case(c));
    FAIL("expected an infeasible schedule");
  } catch (const InfeasibleScheduleError& e) {
    bool lfr = false;
    for (const auto& r : e.rows()) lfr = lfr || r.family.rfind("lfr", 0) == 0;
    CHECK(lfr);
    CHECK(std::string(e.what()).find("lfr") != std::string::npos);
  }
}

TEST_CASE("run_scuc: ample capacity and zero requirements give zero penalties") {
  const GridCase c = testing::finish([] {
    GridCase g = testing::network(3, {{0, 1}, {1, 2}});
    g.generators.push_back(testing::thermal("G1", 0, 0, 300, 10, 20));
    g.generators.push_back(testing::thermal("G2", 2, 0, 300, 10, 25));
    Series load;
    for (int m = 0; m < 1440; ++m) load.push_back(80.0 + 40.0 * std::sin(m / 229.0));
    g.load_zones.push_back(testing::zone("Z", 1, load));
    return g;
  }());
  const DayAheadSchedule s = run_scuc(c, perfect_forecast(c), FlexibilityFlags::flexible(),
                                      ChainedState::from_case(c));
  CHECK(max_abs(s.penalty) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("compute_reserve_margins: curtailed wind counts up, delivered wind counts down") {
  GridCase c = testing::network(1);
  c.var_resources.push_back(testing::ver("W", 0, VerKind::wind, 120, Series(60, 100.0)));
  c = testing::finish(c);
  DayAheadSchedule s;
  s.periods = 1;
  s.ver_curtailment = {{0.3}};
  s.ver_forecast = {{100.0}};
  s.ver_delivered = {{70.0}};
  s.participation.ver_curtailable = {true};
  const auto m = compute_reserve_margins(s, c);
  REQUIRE(m.size() == 1u);
  CHECK(m[0].lfr_up == doctest::Approx(30.0));
  CHECK(m[0].lfr_dn == doctest::Approx(70.0));
}

TEST_CASE("compute_reserve_margins: a unit at p_max adds nothing upward; an all-off hour leaves VER terms") {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 10, 100, 2, 20));
  c.var_resources.push_back(testing::ver("W", 0, VerKind::wind, 60, Series(120, 40.0)));
  c = testing::finish(c);
  DayAheadSchedule s;
  s.periods = 2;
  s.gen_on = {{1.0, 0.0}};
  s.gen_power = {{100.0, 0.0}};
  s.ver_curtailment = {{0.0, 0.5}};
  s.ver_forecast = {{40.0, 40.0}};
  s.ver_delivered = {{40.0, 20.0}};
  s.participation.ver_curtailable = {true};
  s.initial.gen_power = {100.0};
  const auto m = compute_reserve_margins(s, c);
  CHECK(m[0].lfr_up == doctest::Approx(0.0));
  CHECK(m[0].lfr_dn == doctest::Approx(90.0 + 40.0));
  // Hour 1: the unit is off; only the wind terms remain, plus the unit's
  // scheduled 100 MW drop which frees ramp room.
  CHECK(m[1].lfr_up == doctest::Approx(20.0));
  CHECK(m[1].lfr_dn == doctest::Approx(20.0));
  const double wind_ramp = (20.0 - 40.0) / 60.0, gen_ramp = -100.0 / 60.0;
  CHECK(m[1].ramp_up == doctest::Approx(0.5 * 60.0 - wind_ramp - gen_ramp));
  CHECK(m[1].ramp_dn == doctest::Approx(0.5 * 60.0 + wind_ramp + gen_ramp));
}

TEST_CASE("run_scuc: schedules on toy3 pass the independent replay in both modes") {
  const GridCase c = load_case(std::string(EWN_FIXTURES) + "/toy3");
  for (const auto flex : {FlexibilityFlags::flexible(), FlexibilityFlags::conventional()}) {
    const DayAheadSchedule s = run_scuc(c, perfect_forecast(c), flex, ChainedState::from_case(c));
    testing::ViolationLog log(1e-6);
    testing::replay_scuc(c, s, flex, log);
    CHECK(log.checks() > 500);
    CHECK_MESSAGE(log.items().empty(), log.summary());
    for (std::size_t k = 0; k < c.generators.size(); ++k)
      for (int t = 0; t < 24; ++t) {
        const double prev = t ? s.gen_on[k][t - 1] : double(c.generators[k].initial_on);
        CHECK(s.gen_on[k][t] - prev == doctest::Approx(s.gen_startup[k][t] - s.gen_shutdown[k][t]));
      }
  }
}

TEST_CASE("run_scuc: the flexible objective never exceeds the conventional one") {
  std::mt19937_64 rng(7);
  GridCase c = load_case(std::string(EWN_FIXTURES) + "/toy3");
  c.var_resources[0].kind = VerKind::hydro_ror;
  ScucOptions opts;
  opts.mip = exact_mip();
  for (double p_res : {0.0, 20.0}) {
    c.config.p_res = p_res;
    const ScucForecast f = perfect_forecast(c);
    const auto init = ChainedState::from_case(c);
    const double flex = run_scuc(c, f, FlexibilityFlags::flexible(), init, opts).objective;
    const double conv = run_scuc(c, f, FlexibilityFlags::conventional(), init, opts).objective;
    CHECK_MESSAGE(flex <= conv + 1e-6 * std::abs(conv), "p_res " << p_res << ": " << flex << " vs " << conv);
  }
}

TEST_CASE("run_scuc: nodal penalties appear only when balance is otherwise infeasible") {
  // Demand above the fleet maximum in the evening.
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 0, 100, 100, 20));
  Series load;
  for (int m = 0; m < 1440; ++m) load.push_back(m >= 1080 ? 130.0 : 70.0);
  c.load_zones.push_back(testing::zone("Z", 0, load));
  c = testing::finish(c);
  const ScucForecast f = perfect_forecast(c);
  const auto init = ChainedState::from_case(c);
  const DayAheadSchedule s = run_scuc(c, f, FlexibilityFlags::flexible(), init);
  for (int t = 0; t < 24; ++t) {
    if (t >= 18) CHECK(std::abs(s.penalty[0][t]) == doctest::Approx(30.0).epsilon(1e-6));
    else CHECK(std::abs(s.penalty[0][t]) <= 1e-6);
  }
  GridCase strict = c;
  strict.config.penalty_bound = 0.0;
  CHECK_THROWS_AS(run_scuc(strict, f, FlexibilityFlags::flexible(), init), InfeasibleScheduleError);

  GridCase easy = c;
  for (auto& x : easy.load_zones[0].demand_profile) x = std::min(x, 100.0);
  const DayAheadSchedule s2 = run_scuc(easy, perfect_forecast(easy), FlexibilityFlags::flexible(), init);
  CHECK(max_abs(s2.penalty) <= 1e-6);
}

TEST_CASE("build_scuc: forecast length mismatch is a dimension error") {
  const GridCase c = single_unit(50.0);
  ScucForecast f = perfect_forecast(c);
  f.load[0].pop_back();
  CHECK_THROWS_AS(build_scuc(c, f, FlexibilityFlags::flexible(), ChainedState::from_case(c)), DimensionError);
}

TEST_CASE("build_scuc: conventional mode drops water DR and hydro curtailment") {
  GridCase c = load_case(std::string(EWN_FIXTURES) + "/week6");
  const ScucForecast f = perfect_forecast(c);
  const auto init = ChainedState::from_case(c);
  const ScucModel flex = build_scuc_model(c, f, FlexibilityFlags::flexible(), init);
  const ScucModel conv = build_scuc_model(c, f, FlexibilityFlags::conventional(), init);
  for (std::size_t m = 0; m < c.dr_units.size(); ++m) {
    CHECK(flex.index.dr_power[m][0] >= 0);
    CHECK(conv.index.dr_power[m][0] == -1);
  }
  for (std::size_t i = 0; i < c.var_resources.size(); ++i) {
    CHECK(flex.index.ver_w[i][0] >= 0);
    CHECK((conv.index.ver_w[i][0] >= 0) == (c.var_resources[i].kind != VerKind::hydro_ror));
  }
  CHECK(flex.program.num_binaries() > conv.program.num_binaries());
}
