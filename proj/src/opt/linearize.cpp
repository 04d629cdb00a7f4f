#include <cmath>

#include "ewn/error.hpp"
#include "ewn/opt/solvers.hpp"

namespace ewn::opt {

std::vector<double> LinearizedProgram::recover(const std::vector<double>& x) const {
  return {x.begin(), x.begin() + original_variables};
}

LinearizedProgram linearize_quadratics(const MathProgram& program, int segments) {
  if (segments < 1) throw ParameterError("linearization needs at least one segment");
  program.validate();

  LinearizedProgram out;
  out.program = program;
  out.original_variables = program.num_variables();
  MathProgram& lp = out.program;

  for (int j = 0; j < out.original_variables; ++j) {
    Variable v = lp.variable(j);
    const double q = v.quadratic;
    if (q == 0.0) continue;
    lp.variable(j).quadratic = 0.0;

    if (v.kind == VarKind::binary) {  // x^2 == x on {0,1}
      lp.add_linear(j, q);
      continue;
    }
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
      throw ParameterError("quadratic variable '" + v.name + "' needs finite bounds to be linearized");

    lp.add_constant(q * v.lower * v.lower);
    const double range = v.upper - v.lower;
    if (range == 0.0) continue;

    const int count = v.segments > 0 ? v.segments : segments;
    const double width = range / count;
    SegmentMap map;
    map.original = j;
    std::vector<Term> link{{j, 1.0}};
    for (int s = 0; s <= count; ++s) map.breakpoints.push_back(v.lower + width * s);
    map.breakpoints.back() = v.upper;
    for (int s = 0; s < count; ++s) {
      const double a = map.breakpoints[s];
      const double b = map.breakpoints[s + 1];
      const double slope = q * (a + b);
      const int seg = lp.add_variable(v.name + "#" + std::to_string(s), 0.0, b - a);
      lp.add_linear(seg, slope);
      map.segment_vars.push_back(seg);
      map.slopes.push_back(slope);
      link.push_back({seg, -1.0});
    }
    lp.add_constraint("segment_link", -1, std::move(link), Relation::equal, v.lower);
    out.maps.push_back(std::move(map));
  }
  return out;
}

}  // namespace ewn::opt
