#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ewn/error.hpp"
#include "ewn/opt/solvers.hpp"
#include "support/lp_oracle.hpp"

using namespace ewn::opt;

namespace {

MathProgram random_feasible_lp(std::mt19937& rng, int rows, int cols) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0), pos(0.1, 4.0), ub(2.0, 10.0);
  MathProgram p;
  std::vector<double> x0(cols);
  for (int j = 0; j < cols; ++j) {
    const double hi = ub(rng);
    p.add_variable("x" + std::to_string(j), 0.0, hi);
    p.add_linear(j, coef(rng));
    x0[j] = std::uniform_real_distribution<double>(0.0, hi)(rng);
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<Term> terms;
    double act = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double a = coef(rng);
      terms.push_back({j, a});
      act += a * x0[j];
    }
    const int kind = i % 3;
    if (kind == 0) p.add_constraint("le", i, terms, Relation::less_equal, act + pos(rng));
    else if (kind == 1) p.add_constraint("ge", i, terms, Relation::greater_equal, act - pos(rng));
    else p.add_constraint("eq", i, terms, Relation::equal, act);
  }
  return p;
}

}  // namespace

TEST_CASE("solve_lp: simple bounds") {
  MathProgram p;
  const int x = p.add_variable("x", -kInfinity, kInfinity);
  p.add_linear(x, 1.0);
  p.add_constraint("lo", -1, {{x, 1.0}}, Relation::greater_equal, 2.0);
  p.add_constraint("hi", -1, {{x, 1.0}}, Relation::less_equal, 5.0);
  const Solution s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.values[0] == doctest::Approx(2.0));
  CHECK(s.objective == doctest::Approx(2.0));
}

TEST_CASE("solve_lp: contradictory rows are infeasible") {
  MathProgram p;
  const int x = p.add_variable("x", -kInfinity, kInfinity);
  p.add_linear(x, 1.0);
  p.add_constraint("a", -1, {{x, 1.0}}, Relation::greater_equal, 3.0);
  p.add_constraint("b", -1, {{x, 1.0}}, Relation::less_equal, 1.0);
  CHECK(solve_lp(p).status == SolveStatus::infeasible);
}

TEST_CASE("solve_lp: unbounded ray") {
  MathProgram p;
  const int x = p.add_variable("x", 0.0, kInfinity);
  const int y = p.add_variable("y", 0.0, kInfinity);
  p.add_linear(x, -1.0);
  p.add_constraint("r", -1, {{x, 1.0}, {y, -1.0}}, Relation::less_equal, 1.0);
  CHECK(solve_lp(p).status == SolveStatus::unbounded);
}

TEST_CASE("solve_lp: rejects binaries and quadratics") {
  MathProgram p;
  p.add_binary("b");
  CHECK_THROWS_AS(solve_lp(p), ewn::ValidationError);
  MathProgram q;
  q.add_variable("x", 0, 1);
  q.add_quadratic(0, 1.0);
  CHECK_THROWS_AS(solve_lp(q), ewn::ValidationError);
}

TEST_CASE("solve_lp: random dense LPs match the tableau oracle") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 25; ++trial) {
    const MathProgram p = random_feasible_lp(rng, 20, 30);
    const Solution s = solve_lp(p);
    const auto oracle = ewn::testing::tableau_lp(p);
    REQUIRE(oracle.feasible);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == doctest::Approx(oracle.objective).epsilon(1e-6));
    CHECK(p.max_violation(s.values) <= 1e-7);
  }
}

TEST_CASE("solve_lp: optimality certificate (duality gap)") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const MathProgram p = random_feasible_lp(rng, 12, 18);
    const Solution s = solve_lp(p);
    REQUIRE(s.status == SolveStatus::optimal);
    // Lagrangian dual value: sum_i y_i b_i + sum_j (d_j at its active bound).
    double dual = 0.0;
    for (int i = 0; i < p.num_constraints(); ++i) {
      const auto& c = p.constraints()[i];
      const double y = s.row_duals[i];
      if (c.relation == Relation::less_equal) CHECK(y <= 1e-7);
      if (c.relation == Relation::greater_equal) CHECK(y >= -1e-7);
      dual += y * c.rhs;
    }
    for (int j = 0; j < p.num_variables(); ++j) {
      const double d = s.reduced_costs[j];
      const auto& v = p.variable(j);
      dual += d > 0 ? d * v.lower : d * v.upper;
    }
    CHECK(std::abs(dual - s.objective) <= 1e-6 * std::max(1.0, std::abs(s.objective)));
  }
}

TEST_CASE("solve_lp: warm start reproduces the optimum") {
  std::mt19937 rng(99);
  MathProgram p = random_feasible_lp(rng, 15, 20);
  const Solution cold = solve_lp(p);
  REQUIRE(cold.status == SolveStatus::optimal);
  p.variable(3).upper = std::max(p.variable(3).lower, cold.values[3] * 0.5);
  const Solution warm = solve_lp(p, {}, &cold.basis);
  const Solution fresh = solve_lp(p);
  REQUIRE(warm.status == fresh.status);
  if (fresh.status == SolveStatus::optimal) CHECK(warm.objective == doctest::Approx(fresh.objective).epsilon(1e-7));
}

TEST_CASE("linearize_quadratics: breakpoints and slopes") {
  MathProgram p;
  const int x = p.add_variable("x", 0.0, 10.0);
  p.add_quadratic(x, 1.0);
  const LinearizedProgram lin = linearize_quadratics(p, 2);
  REQUIRE(lin.maps.size() == 1);
  CHECK(lin.maps[0].breakpoints == std::vector<double>{0.0, 5.0, 10.0});
  CHECK(lin.maps[0].slopes[0] == doctest::Approx(5.0));
  CHECK(lin.maps[0].slopes[1] == doctest::Approx(15.0));
  CHECK_FALSE(lin.program.has_quadratic());
}

TEST_CASE("linearize_quadratics: no quadratic terms leaves the program alone") {
  MathProgram p;
  p.add_variable("x", 0.0, 10.0);
  p.add_linear(0, 3.0);
  const LinearizedProgram lin = linearize_quadratics(p, 8);
  CHECK(lin.program.num_variables() == 1);
  CHECK(lin.program.num_constraints() == 0);
  CHECK(lin.maps.empty());
}

TEST_CASE("linearize_quadratics: error bound on a constrained minimum") {
  MathProgram p;
  const int x = p.add_variable("x", 0.0, 10.0);
  p.add_quadratic(x, 1.0);
  p.add_constraint("fix", -1, {{x, 1.0}}, Relation::greater_equal, 3.0);
  const LinearizedProgram lin = linearize_quadratics(p, 10);
  const Solution s = solve_lp(lin.program);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.objective >= 9.0 - 1e-9);
  CHECK(s.objective <= 9.0 + 0.25 + 1e-9);
  CHECK(lin.recover(s.values)[0] == doctest::Approx(3.0));
}

TEST_CASE("linearize_quadratics: negative curvature is rejected") {
  MathProgram p;
  p.add_variable("x", 0.0, 1.0);
  p.variable(0).quadratic = -1.0;
  CHECK_THROWS_AS(linearize_quadratics(p, 4), ewn::ValidationError);
}

TEST_CASE("linearize_quadratics: over-approximation bound holds pointwise") {
  // For x on a grid, the piecewise cost minus q x^2 lies in [0, q (w/2)^2].
  const double q = 2.5, lo = -4.0, hi = 6.0;
  const int segs = 5;
  MathProgram p;
  p.add_variable("x", lo, hi);
  p.add_quadratic(0, q);
  const LinearizedProgram lin = linearize_quadratics(p, segs);
  const double w = (hi - lo) / segs;
  for (int k = 0; k <= 200; ++k) {
    const double x = lo + (hi - lo) * k / 200.0;
    double cost = lin.program.objective_constant();
    double remaining = x - lo;
    for (std::size_t s = 0; s < lin.maps[0].slopes.size(); ++s) {
      const double take = std::min(remaining, w);
      cost += take * lin.maps[0].slopes[s];
      remaining -= take;
    }
    const double err = cost - q * x * x;
    CHECK(err >= -1e-9);
    CHECK(err <= q * w * w / 4 + 1e-9);
  }
}

TEST_CASE("write_text lists every variable and row") {
  MathProgram p;
  p.add_variable("x", 0, 1);
  p.add_constraint("c", 0, {{0, 1.0}}, Relation::less_equal, 1.0);
  std::ostringstream out;
  p.write_text(out);
  CHECK(out.str().find("var 0 x C") != std::string::npos);
  CHECK(out.str().find("row 0 c 0") != std::string::npos);
}

TEST_CASE("solve_qp: two-unit dispatch meets the equal-marginal-cost condition") {
  const double c1 = 12.0, q1 = 0.02, c2 = 15.0, q2 = 0.01, load = 100.0;
  MathProgram p;
  const int a = p.add_variable("p1", 0.0, 200.0);
  const int b = p.add_variable("p2", 0.0, 200.0);
  p.add_linear(a, c1);
  p.add_quadratic(a, q1);
  p.add_linear(b, c2);
  p.add_quadratic(b, q2);
  p.add_constraint("balance", 0, {{a, 1.0}, {b, 1.0}}, Relation::equal, load);
  const Solution s = solve_qp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  // lambda = (load + sum c/2q) / sum 1/2q
  const double lambda = (load + c1 / (2 * q1) + c2 / (2 * q2)) / (1 / (2 * q1) + 1 / (2 * q2));
  CHECK(std::abs(s.values[a] - (lambda - c1) / (2 * q1)) <= 1e-6);
  CHECK(std::abs(s.values[b] - (lambda - c2) / (2 * q2)) <= 1e-6);
  CHECK(std::abs(c1 + 2 * q1 * s.values[a] - (c2 + 2 * q2 * s.values[b])) <= 1e-6);
}

TEST_CASE("solve_qp: bound-limited unit takes the rest at its cap") {
  MathProgram p;
  const int a = p.add_variable("cheap", 0.0, 30.0);
  const int b = p.add_variable("dear", 0.0, 200.0);
  p.add_linear(a, 1.0);
  p.add_quadratic(a, 0.01);
  p.add_linear(b, 20.0);
  p.add_quadratic(b, 0.01);
  p.add_constraint("balance", 0, {{a, 1.0}, {b, 1.0}}, Relation::equal, 100.0);
  const Solution s = solve_qp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.values[a] == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(s.values[b] == doctest::Approx(70.0).epsilon(1e-12));
}

TEST_CASE("solve_qp: random convex programs sit inside the linearization sandwich") {
  std::mt19937 rng(515);
  for (int trial = 0; trial < 15; ++trial) {
    MathProgram p = random_feasible_lp(rng, 8, 12);
    std::uniform_real_distribution<double> q(0.0, 2.0);
    for (int j = 0; j < p.num_variables(); ++j)
      if (j % 3 != 1) p.add_quadratic(j, q(rng));  // every third variable stays linear
    const Solution s = solve_qp(p);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(p.max_violation(s.values) <= 1e-7);
    const int segs = 64;
    const LinearizedProgram lin = linearize_quadratics(p, segs);
    const auto oracle = ewn::testing::tableau_lp(lin.program);
    REQUIRE(oracle.feasible);
    double slack = 0.0;
    for (int j = 0; j < p.num_variables(); ++j) {
      const auto& v = p.variable(j);
      const double w = (v.upper - v.lower) / segs;
      slack += v.quadratic * w * w / 4;
    }
    CHECK(s.objective <= oracle.objective + 1e-7);
    CHECK(s.objective >= oracle.objective - slack - 1e-7);
  }
}

TEST_CASE("solve_qp: linear-only program reduces to the LP optimum") {
  std::mt19937 rng(8);
  const MathProgram p = random_feasible_lp(rng, 10, 14);
  const Solution qp = solve_qp(p);
  const Solution lp = solve_lp(p);
  REQUIRE(qp.status == SolveStatus::optimal);
  CHECK(qp.objective == doctest::Approx(lp.objective).epsilon(1e-9));
}

namespace {

MathProgram random_knapsack(std::mt19937& rng, int items) {
  std::uniform_real_distribution<double> w(1.0, 10.0), v(1.0, 20.0);
  MathProgram p;
  std::vector<Term> row;
  double total = 0.0;
  for (int i = 0; i < items; ++i) {
    const int b = p.add_binary("b" + std::to_string(i));
    p.add_linear(b, -v(rng));
    const double wi = w(rng);
    row.push_back({b, wi});
    total += wi;
  }
  p.add_constraint("capacity", -1, row, Relation::less_equal, 0.4 * total);
  return p;
}

}  // namespace

TEST_CASE("solve_miqp: knapsack matches 1024-case enumeration") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const MathProgram p = random_knapsack(rng, 10);
    MipOptions opt;
    opt.gap_limit = 0.0;
    const Solution s = solve_miqp(p, opt);
    REQUIRE(s.status == SolveStatus::optimal);
    double best = kInfinity;
    for (int mask = 0; mask < 1024; ++mask) {
      std::vector<double> x(10);
      for (int i = 0; i < 10; ++i) x[i] = (mask >> i) & 1;
      if (p.max_violation(x) <= 0.0) best = std::min(best, p.objective(x));
    }
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
    CHECK(p.max_violation(s.values) <= 1e-7);
    for (std::size_t k = 1; k < s.incumbent_history.size(); ++k)
      CHECK(s.incumbent_history[k] <= s.incumbent_history[k - 1]);
  }
}

TEST_CASE("solve_miqp: binaries fixed by bounds give the LP result") {
  std::mt19937 rng(42);
  MathProgram p = random_feasible_lp(rng, 6, 8);
  MathProgram lp = p;
  for (int k = 0; k < 3; ++k) {
    const int b = p.add_binary("b" + std::to_string(k));
    p.variable(b).lower = p.variable(b).upper = k % 2;
    p.add_linear(b, 3.0);
    const int c = lp.add_variable("b" + std::to_string(k), k % 2, k % 2);
    lp.add_linear(c, 3.0);
  }
  const Solution mip = solve_miqp(p);
  const Solution rel = solve_lp(lp);
  REQUIRE(mip.status == SolveStatus::optimal);
  CHECK(mip.objective == doctest::Approx(rel.objective).epsilon(1e-9));
}

TEST_CASE("solve_miqp: small mixed program equals pattern enumeration") {
  // Commitment-style structure: x_i <= cap_i * b_i, sum x = demand, quadratic x costs.
  std::mt19937 rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MathProgram p;
    const int units = 4, periods = 2;
    std::vector<int> bins;
    for (int t = 0; t < periods; ++t) {
      std::vector<Term> bal;
      for (int i = 0; i < units; ++i) {
        const double cap = 30 + 40 * u(rng);
        const int x = p.add_variable("x", 0.0, cap);
        const int b = p.add_binary("b");
        bins.push_back(b);
        p.add_linear(x, 5 + 20 * u(rng));
        p.add_quadratic(x, 0.05 * u(rng));
        p.add_linear(b, 50 + 200 * u(rng));
        p.add_constraint("cap", t, {{x, 1.0}, {b, -cap}}, Relation::less_equal, 0.0);
        p.add_constraint("min", t, {{x, 1.0}, {b, -0.2 * cap}}, Relation::greater_equal, 0.0);
        bal.push_back({x, 1.0});
      }
      p.add_constraint("demand", t, bal, Relation::equal, 60 + 40 * u(rng));
    }
    MipOptions opt;
    opt.gap_limit = 0.0;
    const Solution s = solve_miqp(p, opt);
    const LinearizedProgram lin = linearize_quadratics(p, opt.segments);
    double best = kInfinity;
    for (int mask = 0; mask < (1 << bins.size()); ++mask) {
      MathProgram fixed = lin.program;
      for (std::size_t k = 0; k < bins.size(); ++k) {
        auto& v = fixed.variable(bins[k]);
        v.kind = VarKind::continuous;
        v.lower = v.upper = (mask >> k) & 1;
      }
      const auto r = ewn::testing::tableau_lp(fixed);
      if (r.feasible) best = std::min(best, r.objective);
    }
    REQUIRE(s.ok());
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("solve_miqp: infeasible integer program reports nodes") {
  MathProgram p;
  const int a = p.add_binary("a");
  const int b = p.add_binary("b");
  p.add_constraint("odd", -1, {{a, 2.0}, {b, 2.0}}, Relation::equal, 1.0);
  const Solution s = solve_miqp(p);
  CHECK(s.status == SolveStatus::infeasible);
  CHECK(s.nodes >= 1);
}
