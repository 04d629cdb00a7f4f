#pragma once

#include <vector>

#include "ewn/opt/math_program.hpp"

namespace ewn::opt {

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  long iteration_limit = 0;  // 0 derives a limit from the problem size
  int refactor_interval = 64;
  int degenerate_switch = 50;  // consecutive degenerate pivots before Bland's rule
};

/// Mapping from one original quadratic variable to its segment variables.
struct SegmentMap {
  int original = -1;
  std::vector<int> segment_vars;
  std::vector<double> breakpoints;  // size segments + 1
  std::vector<double> slopes;       // secant slope of each segment
};

struct LinearizedProgram {
  MathProgram program;
  std::vector<SegmentMap> maps;
  int original_variables = 0;

  /// Original variable values; segment variables are dropped and each
  /// original quadratic variable is rebuilt as lower + sum(segments).
  std::vector<double> recover(const std::vector<double>& x) const;
};

/// Replaces every q*x^2 (q > 0) by a convex piecewise-linear secant
/// interpolation with breakpoints evenly spaced on [lower, upper].
/// The interpolation over-approximates q*x^2 by at most q*(width/2)^2 where
/// width = (upper - lower) / segments. Quadratic variables need finite bounds.
LinearizedProgram linearize_quadratics(const MathProgram& program, int segments);

/// Bounded-variable primal revised simplex. Rejects programs with binaries
/// or quadratic terms.
Solution solve_lp(const MathProgram& program, const LpOptions& options = {},
                  const Basis* warm_start = nullptr);

struct QpOptions {
  LpOptions lp;
  double tolerance = 1e-9;
  long iteration_limit = 0;
};

/// Exact convex QP with a diagonal Hessian via a primal active-set method,
/// started from an LP vertex of the same feasible region.
Solution solve_qp(const MathProgram& program, const QpOptions& options = {});

struct MipOptions {
  double gap_limit = 1e-4;
  long node_limit = 1'000'000;
  int segments = 8;
  double integrality_tol = 1e-6;
  LpOptions lp;
  bool dive_heuristic = true;
};

/// Best-bound branch and bound over the LP relaxation of the linearized
/// program. Values are returned for the original variables, objective is the
/// linearized one.
Solution solve_miqp(const MathProgram& program, const MipOptions& options = {});

}  // namespace ewn::opt
