#include <doctest.h>

#include <cmath>

#include "ewn/error.hpp"
#include "ewn/forecast.hpp"
#include "ewn/sced.hpp"
#include "support/cases.hpp"
#include "support/replay.hpp"

using namespace ewn;

namespace {

// One-hour schedule with the given commitment and nothing else scheduled.
DayAheadSchedule hour_schedule(const GridCase& c, const std::vector<bool>& on, const FlexibilityFlags& flex) {
  DayAheadSchedule s;
  s.periods = 1;
  for (bool b : on) s.gen_on.push_back({b ? 1.0 : 0.0});
  for (std::size_t m = 0; m < c.dr_units.size(); ++m) s.dr_on.push_back({0.0});
  s.storage_discharge.assign(c.storage.size(), {0.0});
  s.storage_charge.assign(c.storage.size(), {0.0});
  s.participation = Participation::from(c, flex);
  return s;
}

DispatchSetpoints prev_state(const GridCase& c, const std::vector<double>& power) {
  ChainedState st = ChainedState::from_case(c);
  for (std::size_t k = 0; k < power.size(); ++k) {
    st.gen_on[k] = power[k] > 0.0;
    st.gen_power[k] = power[k];
  }
  return DispatchSetpoints::from_state(c, st);
}

ScedInput input(std::vector<double> ver, std::vector<double> load) {
  ScedInput in;
  in.ver = std::move(ver);
  in.load = std::move(load);
  return in;
}

GridCase two_units() {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G1", 0, 0, 200, 50, 20, 0.05));
  c.generators.push_back(testing::thermal("G2", 0, 0, 200, 50, 25, 0.02));
  c.load_zones.push_back(testing::zone("Z", 0, Series(60, 150.0)));
  return testing::finish(c);
}

}  // namespace

TEST_CASE("run_sced: interior optimum equalizes marginal costs") {
  const GridCase c = two_units();
  const DispatchSetpoints prev = prev_state(c, {75, 75});
  const DispatchSetpoints d =
      run_sced(c, hour_schedule(c, {true, true}, FlexibilityFlags::flexible()), input({}, {150.0}), &prev);
  // 20 + 0.1 P1 = 25 + 0.04 P2 = 2 C_x P_x = lambda with P1 + P2 + P_x = 150
  const double cx = c.config.penalty_cost;
  const double lambda = (150.0 + 20.0 / 0.1 + 25.0 / 0.04) / (1.0 / 0.1 + 1.0 / 0.04 + 1.0 / (2.0 * cx));
  CHECK(std::abs(d.gen_power[0] - (lambda - 20.0) / 0.1) <= 1e-6);
  CHECK(std::abs(d.gen_power[1] - (lambda - 25.0) / 0.04) <= 1e-6);
  CHECK(std::abs(d.penalty[0] - lambda / (2.0 * cx)) <= 1e-6);
  CHECK(std::abs((20 + 0.1 * d.gen_power[0]) - (25 + 0.04 * d.gen_power[1])) <= 1e-6);
}

TEST_CASE("run_sced: a ramp-limited unit leaves the shortfall to the penalty") {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 0, 200, 1, 20));
  c.load_zones.push_back(testing::zone("Z", 0, Series(60, 70.0)));
  c = testing::finish(c);
  const DispatchSetpoints prev = prev_state(c, {50});
  const DispatchSetpoints d =
      run_sced(c, hour_schedule(c, {true}, FlexibilityFlags::flexible()), input({}, {70.0}), &prev);
  CHECK(d.gen_power[0] == doctest::Approx(55.0));
  CHECK(d.penalty[0] == doctest::Approx(15.0));
}

TEST_CASE("run_sced: a just-started unit may sit anywhere in its range") {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 30, 200, 1, 20));
  c.load_zones.push_back(testing::zone("Z", 0, Series(60, 120.0)));
  c = testing::finish(c);
  const DispatchSetpoints prev = prev_state(c, {0});
  const DispatchSetpoints d =
      run_sced(c, hour_schedule(c, {true}, FlexibilityFlags::flexible()), input({}, {120.0}), &prev);
  // The quadratic penalty carries c_L / (2 C_x) MW at the optimum.
  CHECK(d.gen_power[0] == doctest::Approx(120.0 - 20.0 / (2.0 * c.config.penalty_cost)).epsilon(1e-9));
}

TEST_CASE("run_sced: repeating a step from its own optimum returns the same setpoints") {
  const GridCase c = two_units();
  const DayAheadSchedule s = hour_schedule(c, {true, true}, FlexibilityFlags::flexible());
  const DispatchSetpoints prev = prev_state(c, {60, 90});
  const DispatchSetpoints a = run_sced(c, s, input({}, {150.0}), &prev);
  const DispatchSetpoints b = run_sced(c, s, input({}, {150.0}), &a);
  for (std::size_t k = 0; k < 2; ++k) CHECK(b.gen_power[k] == doctest::Approx(a.gen_power[k]).epsilon(1e-9));
}

TEST_CASE("run_sced: a 10 MW wind drop is picked up by the committed unit") {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 0, 200, 5, 20));
  c.var_resources.push_back(testing::ver("W", 0, VerKind::wind, 100, Series(60, 40.0)));
  c.load_zones.push_back(testing::zone("Z", 0, Series(60, 90.0)));
  c = testing::finish(c);
  DispatchSetpoints prev = prev_state(c, {50});
  prev.ver_delivered = {40.0};
  const DispatchSetpoints d =
      run_sced(c, hour_schedule(c, {true}, FlexibilityFlags::flexible()), input({30.0}, {90.0}), &prev);
  const double px = 20.0 / (2.0 * c.config.penalty_cost);
  CHECK(d.gen_power[0] == doctest::Approx(60.0 - px).epsilon(1e-9));
  CHECK(d.ver_curtailment[0] == doctest::Approx(0.0));
  CHECK(d.penalty[0] == doctest::Approx(px).epsilon(1e-9));
}

TEST_CASE("run_sced: curtailable hydro lowers the step cost") {
  GridCase c = testing::network(1);
  c.generators.push_back(testing::thermal("G", 0, 50, 200, 5, 20));
  c.var_resources.push_back(testing::ver("H", 0, VerKind::hydro_ror, 100, Series(60, 80.0)));
  c.load_zones.push_back(testing::zone("Z", 0, Series(60, 100.0)));
  c = testing::finish(c);
  DispatchSetpoints prev = prev_state(c, {50});
  prev.ver_delivered = {60.0};
  const ScedInput in = input({80.0}, {100.0});
  const auto flex = run_sced(c, hour_schedule(c, {true}, FlexibilityFlags::flexible()), in, &prev);
  const auto conv = run_sced(c, hour_schedule(c, {true}, FlexibilityFlags::conventional()), in, &prev);
  CHECK(flex.objective <= conv.objective + 1e-9);
  CHECK(conv.ver_curtailment[0] == 0.0);
  CHECK(flex.ver_delivered[0] == doctest::Approx(50.0));
  CHECK(conv.penalty[0] == doctest::Approx(-30.0));
}

TEST_CASE("run_sced: a missing previous state is a parameter error") {
  const GridCase c = two_units();
  const DayAheadSchedule s = hour_schedule(c, {true, true}, FlexibilityFlags::flexible());
  CHECK_THROWS_AS(run_sced(c, s, input({}, {150.0}), nullptr), ParameterError);
  CHECK_THROWS_AS(build_sced(c, s, input({}, {150.0}), nullptr), ParameterError);
}

TEST_CASE("run_sced: the step objective is the hourly cost rate scaled by T_m/60") {
  const GridCase c = two_units();
  const DispatchSetpoints prev = prev_state(c, {75, 75});
  const DispatchSetpoints d =
      run_sced(c, hour_schedule(c, {true, true}, FlexibilityFlags::flexible()), input({}, {150.0}), &prev);
  double rate = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& g = c.generators[k];
    rate += g.cost_linear * d.gen_power[k] + g.cost_quadratic * d.gen_power[k] * d.gen_power[k];
  }
  rate += c.config.penalty_cost * d.penalty[0] * d.penalty[0];
  CHECK(d.hourly_rate == doctest::Approx(rate).epsilon(1e-9));
  CHECK(d.objective == doctest::Approx(5.0 / 60.0 * rate).epsilon(1e-9));
}

TEST_CASE("run_sced: a day of toy3 dispatch passes the independent replay") {
  const GridCase c = load_case(std::string(EWN_FIXTURES) + "/toy3");
  for (const auto flex : {FlexibilityFlags::flexible(), FlexibilityFlags::conventional()}) {
    ScucForecast f;
    for (const auto& v : c.var_resources) f.ver.push_back(block_average(v.actual_profile, 60));
    for (const auto& z : c.load_zones) f.load.push_back(block_average(z.demand_profile, 60));
    const DayAheadSchedule s = run_scuc(c, f, flex, ChainedState::from_case(c));
    DispatchSetpoints prev = DispatchSetpoints::from_state(c, s.initial);
    testing::ViolationLog log(1e-6);
    for (int step = 0; step < 288; ++step) {
      ScedInput in;
      in.step = step;
      in.hour = step / 12;
      for (const auto& v : c.var_resources) in.ver.push_back(v.actual_profile[5 * step]);
      for (const auto& z : c.load_zones) in.load.push_back(z.demand_profile[5 * step]);
      const DispatchSetpoints d = run_sced(c, s, in, &prev);
      testing::replay_sced(c, s, in, prev, d, log);
      prev = d;
    }
    CHECK(log.checks() > 288 * 10);
    CHECK_MESSAGE(log.items().empty(), log.summary());
  }
}

TEST_CASE("build_sced: an hour outside the schedule is a dimension error") {
  const GridCase c = two_units();
  const DispatchSetpoints prev = prev_state(c, {75, 75});
  ScedInput in = input({}, {150.0});
  in.hour = 3;
  CHECK_THROWS_AS(build_sced(c, hour_schedule(c, {true, true}, FlexibilityFlags::flexible()), in, &prev),
                  DimensionError);
}
