#include <doctest.h>

#include <cmath>
#include <random>

#include "ewn/error.hpp"
#include "ewn/power_flow.hpp"
#include "ewn/regulation.hpp"
#include "support/cases.hpp"

using namespace ewn;

namespace {

GridCase triangle() {
  GridCase c = testing::network(3, {{0, 1}, {1, 2}, {0, 2}});
  return testing::finish(c);
}

// Independent dense solve of B theta = P with the slack row removed.
std::vector<double> dense_angles(const GridCase& c, const std::vector<double>& p, int slack) {
  const int n = static_cast<int>(c.buses.size());
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (const auto& ln : c.lines) {
    const double y = 100.0 * ln.susceptance;
    a[ln.from_bus][ln.from_bus] += y;
    a[ln.to_bus][ln.to_bus] += y;
    a[ln.from_bus][ln.to_bus] -= y;
    a[ln.to_bus][ln.from_bus] -= y;
  }
  for (int i = 0; i < n; ++i) a[i][n] = p[i];
  for (int j = 0; j <= n; ++j) a[slack][j] = 0.0;
  a[slack][slack] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (int r = 0; r < n; ++r)
      if (r != col) {
        const double f = a[r][col] / a[col][col];
        for (int j = col; j <= n; ++j) a[r][j] -= f * a[col][j];
      }
  }
  std::vector<double> th(n);
  for (int i = 0; i < n; ++i) th[i] = a[i][n] / a[i][i];
  return th;
}

// One bus, one AGC unit at `setpoint`, one wind unit, one load.
struct MinuteFixture {
  GridCase c;
  DispatchSetpoints sp;
  std::unique_ptr<DcPowerFlow> pf;

  MinuteFixture(double setpoint, double wind_forecast, double load) {
    c = testing::network(2, {{0, 1}});
    c.generators.push_back(testing::thermal("G", 0, 0, 300, 10, 20));
    c.var_resources.push_back(testing::ver("W", 1, VerKind::wind, 200, Series(60, wind_forecast)));
    c.load_zones.push_back(testing::zone("Z", 1, Series(60, load)));
    c = testing::finish(c);
    sp.gen_on = {true};
    sp.gen_power = {setpoint};
    sp.ver_available = {wind_forecast};
    sp.ver_curtailment = {0.0};
    sp.load_forecast = {load};
    sp.load_curtailment = {0.0};
    pf = std::make_unique<DcPowerFlow>(c, 0);
  }

  MinuteRecord step(double wind, double load, double capacity = 40.0) const {
    MinuteActuals a;
    a.ver = {wind};
    a.load = {load};
    return step_minute(c, sp, a, {pf.get(), capacity});
  }
};

double closure(const MinuteRecord& r) {
  double s = r.slack + r.regulation_unassigned;
  for (double p : r.gen_power) s += p;
  for (double p : r.dr_power) s += p;
  for (double p : r.storage_injection) s += p;
  for (double p : r.ver_output) s += p;
  for (double p : r.load) s -= p;
  return s;
}

}  // namespace

TEST_CASE("dc_power_flow: two buses carry the full transfer") {
  const GridCase c = testing::finish(testing::network(2, {{0, 1}}));
  const PowerFlowResult r = dc_power_flow(c, {100.0, -100.0}, 0);
  CHECK(r.flows[0] == doctest::Approx(100.0));
  CHECK(r.slack_power == doctest::Approx(0.0));
}

TEST_CASE("dc_power_flow: equal-susceptance triangle splits 60/30") {
  const GridCase c = triangle();
  const PowerFlowResult r = dc_power_flow(c, {90.0, 0.0, -90.0}, 0);
  CHECK(r.flows[2] == doctest::Approx(60.0));  // 1 -> 3 direct
  CHECK(r.flows[0] == doctest::Approx(30.0));  // 1 -> 2
  CHECK(r.flows[1] == doctest::Approx(30.0));  // 2 -> 3
}

TEST_CASE("dc_power_flow: the slack closes a +15 MW surplus") {
  const GridCase c = triangle();
  CHECK(dc_power_flow(c, {50.0, -20.0, -15.0}, 0).slack_power == doctest::Approx(-15.0));
}

TEST_CASE("dc_power_flow: a split network raises an islanding error listing the components") {
  const GridCase c = testing::finish(testing::network(4, {{0, 1}, {2, 3}}));
  try {
    DcPowerFlow pf(c, 0);
    FAIL("expected an islanding error");
  } catch (const IslandingError& e) {
    REQUIRE(e.components().size() == 2u);
    CHECK(e.components()[0] == std::vector<int>{0, 1});
    CHECK(e.components()[1] == std::vector<int>{2, 3});
  }
  CHECK_THROWS_AS(check_connected(c), ValidationError);
}

TEST_CASE("dc_power_flow: angles match a dense solve on a random meshed network") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.5, 20.0);
  GridCase c = testing::network(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}});
  for (auto& ln : c.lines) ln.susceptance = U(rng);
  c = testing::finish(c);
  const std::vector<double> p = {40, -10, 25, -30, -50, 25};
  const PowerFlowResult r = dc_power_flow(c, p, 2);
  const std::vector<double> th = dense_angles(c, p, 2);
  for (int b = 0; b < 6; ++b) CHECK(r.angles[b] == doctest::Approx(th[b]).epsilon(1e-9));
  // Nodal flow balance at every non-slack bus.
  std::vector<double> net(6, 0.0);
  for (std::size_t l = 0; l < c.lines.size(); ++l) {
    net[c.lines[l].from_bus] += r.flows[l];
    net[c.lines[l].to_bus] -= r.flows[l];
  }
  for (int b = 0; b < 6; ++b)
    if (b != 2) CHECK(net[b] == doctest::Approx(p[b]).epsilon(1e-9));
}

TEST_CASE("dc_power_flow: flipping a line's orientation negates only its flow") {
  GridCase a = testing::network(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {1, 3}});
  a = testing::finish(a);
  const std::vector<double> p = {60, -20, 10, -30, -20};
  const PowerFlowResult ra = dc_power_flow(a, p, 0);
  for (std::size_t l = 0; l < a.lines.size(); ++l) {
    GridCase b = a;
    std::swap(b.lines[l].from_bus, b.lines[l].to_bus);
    b = testing::finish(b);
    const PowerFlowResult rb = dc_power_flow(b, p, 0);
    for (std::size_t m = 0; m < a.lines.size(); ++m)
      CHECK(rb.flows[m] == doctest::Approx(m == l ? -ra.flows[m] : ra.flows[m]).epsilon(1e-12));
    for (int n = 0; n < 5; ++n) CHECK(rb.angles[n] == doctest::Approx(ra.angles[n]).epsilon(1e-12));
  }
}

TEST_CASE("choose_slack_bus: lowest bus with a committed unit") {
  GridCase c = testing::network(4, {{0, 1}, {1, 2}, {2, 3}});
  c.generators.push_back(testing::thermal("A", 3, 0, 10, 1, 1));
  c.generators.push_back(testing::thermal("B", 1, 0, 10, 1, 1));
  c = testing::finish(c);
  CHECK(choose_slack_bus(c, {true, true}) == 1);
  CHECK(choose_slack_bus(c, {true, false}) == 3);
  CHECK(choose_slack_bus(c, {false, false}) == 0);
}

TEST_CASE("apply_regulation: clamp examples") {
  const std::vector<AgcState> fleet = {{0, 100.0, 100.0}};
  const RegulationResponse a = apply_regulation(-10.0, fleet, 40.0);
  CHECK(a.regulation == 10.0);
  CHECK(a.residual == 0.0);
  const RegulationResponse b = apply_regulation(-55.0, fleet, 40.0);
  CHECK(b.regulation == 40.0);
  CHECK(b.residual == -15.0);
  const RegulationResponse z = apply_regulation(0.0, fleet, 40.0);
  CHECK(z.regulation == 0.0);
  CHECK(z.residual == 0.0);
  CHECK_THROWS_AS(apply_regulation(1.0, fleet, -1.0), ParameterError);
}

TEST_CASE("apply_regulation: shares follow headroom and never exceed capacity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 60.0), I(-120.0, 120.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::vector<AgcState> fleet = {{0, U(rng), U(rng)}, {1, U(rng), U(rng)}, {2, U(rng), U(rng)}};
    const double imb = I(rng), cap = U(rng);
    const RegulationResponse r = apply_regulation(imb, fleet, cap);
    double sum = 0.0, room = 0.0;
    for (const auto& a : fleet) room += imb < 0 ? a.headroom_up : a.headroom_dn;
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      sum += r.allocation[i];
      const double h = imb < 0 ? fleet[i].headroom_up : fleet[i].headroom_dn;
      CHECK(std::abs(r.allocation[i]) <= h + 1e-9);
    }
    CHECK(std::abs(sum) == doctest::Approx(std::min(std::abs(r.regulation), room)).epsilon(1e-12));
    CHECK(sum + r.unassigned == doctest::Approx(r.regulation).epsilon(1e-12));
    CHECK(std::abs(r.regulation) <= cap + 1e-12);
    CHECK(std::abs(r.regulation) == doctest::Approx(std::min(std::abs(imb), cap)));
    CHECK(r.regulation * imb <= 0.0);
    CHECK(r.residual == doctest::Approx(imb + r.regulation));
  }
}

TEST_CASE("apply_regulation: an empty fleet still regulates from the system reserve") {
  const RegulationResponse r = apply_regulation(-25.0, {}, 40.0);
  CHECK(r.regulation == 25.0);
  CHECK(r.unassigned == 25.0);
  CHECK(r.residual == 0.0);
  const RegulationResponse s = apply_regulation(30.0, {{0, 50.0, 10.0}}, 40.0);
  CHECK(s.regulation == -30.0);
  CHECK(s.allocation[0] == doctest::Approx(-10.0));
  CHECK(s.unassigned == doctest::Approx(-20.0));
}

TEST_CASE("step_minute: perfect forecasts leave no slack") {
  const MinuteFixture f(100.0, 50.0, 150.0);
  const MinuteRecord r = f.step(50.0, 150.0);
  CHECK(std::abs(r.slack) <= 1e-9);
  CHECK(r.regulation == 0.0);
  CHECK(r.flows[0] == doctest::Approx(100.0));
}

TEST_CASE("step_minute: 5 MW of extra wind is absorbed by regulation") {
  const MinuteFixture f(100.0, 50.0, 150.0);
  const MinuteRecord r = f.step(55.0, 150.0);
  CHECK(r.imbalance == doctest::Approx(5.0));
  CHECK(r.regulation == doctest::Approx(-5.0));
  CHECK(r.gen_power[0] == doctest::Approx(95.0));
  CHECK(std::abs(r.slack) <= 1e-9);
}

TEST_CASE("step_minute: a 60 MW bust with 40 MW of capacity leaves 20 MW at the slack") {
  const MinuteFixture f(100.0, 90.0, 190.0);
  for (int m = 0; m < 5; ++m) {
    const MinuteRecord r = f.step(30.0, 190.0);
    CHECK(r.imbalance == doctest::Approx(-60.0));
    CHECK(r.regulation == doctest::Approx(40.0));
    CHECK(std::abs(r.slack) == doctest::Approx(20.0));
    CHECK(std::abs(closure(r)) <= 1e-9);
  }
}

TEST_CASE("step_minute: balance closes and regulation stays in capacity for random minutes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const MinuteFixture f(50.0 + 200.0 * U(rng), 100.0 * U(rng), 80.0 + 150.0 * U(rng));
    const double cap = 60.0 * U(rng);
    const MinuteRecord r = f.step(150.0 * U(rng), 60.0 + 200.0 * U(rng), cap);
    CHECK(std::abs(closure(r)) <= 1e-9);
    CHECK(std::abs(r.regulation) <= cap + 1e-12);
    CHECK(r.gen_power[0] >= -1e-9);
    CHECK(r.gen_power[0] <= 300.0 + 1e-9);
  }
}

TEST_CASE("step_minute: curtailment applies to the actual output") {
  MinuteFixture f(100.0, 80.0, 150.0);
  f.sp.ver_curtailment = {0.25};
  const MinuteRecord r = f.step(40.0, 150.0);
  CHECK(r.ver_output[0] == doctest::Approx(30.0));
}

TEST_CASE("step_minute: a flow above its limit is flagged") {
  MinuteFixture f(100.0, 50.0, 150.0);
  f.c.lines[0].flow_limit = 90.0;
  const MinuteRecord r = f.step(50.0, 150.0);
  REQUIRE(r.flow_violations.size() == 1u);
  CHECK(r.flow_violations[0] == "L1");
}
