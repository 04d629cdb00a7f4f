#include "ewn/opt/math_program.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ewn/error.hpp"

namespace ewn::opt {

int MathProgram::add_variable(std::string name, double lower, double upper, VarKind kind) {
  Variable v;
  v.name = std::move(name);
  v.lower = lower;
  v.upper = upper;
  v.kind = kind;
  variables_.push_back(std::move(v));
  return static_cast<int>(variables_.size()) - 1;
}

int MathProgram::add_constraint(std::string family, int period, std::vector<Term> terms,
                                Relation relation, double rhs) {
  Constraint c;
  c.family = std::move(family);
  c.period = period;
  c.terms = std::move(terms);
  c.relation = relation;
  c.rhs = rhs;
  constraints_.push_back(std::move(c));
  return static_cast<int>(constraints_.size()) - 1;
}

int MathProgram::num_binaries() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(),
                                        [](const Variable& v) { return v.kind == VarKind::binary; }));
}

bool MathProgram::has_quadratic() const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [](const Variable& v) { return v.quadratic != 0.0; });
}

void MathProgram::validate() const {
  const int n = num_variables();
  for (int j = 0; j < n; ++j) {
    const Variable& v = variables_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw ValidationError("variable '" + v.name + "' has inconsistent bounds");
    if (v.quadratic < 0.0)
      throw ValidationError("variable '" + v.name + "' has a negative quadratic coefficient (nonconvex)");
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
      throw ValidationError("binary variable '" + v.name + "' has bounds outside [0,1]");
    if (!std::isfinite(v.linear) || !std::isfinite(v.quadratic))
      throw ValidationError("variable '" + v.name + "' has a non-finite cost");
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    for (const Term& t : constraints_[i].terms) {
      if (t.var < 0 || t.var >= n)
        throw ValidationError("constraint " + std::to_string(i) + " (" + constraints_[i].family +
                              ") references unknown variable " + std::to_string(t.var));
      if (!std::isfinite(t.coef))
        throw ValidationError("constraint " + std::to_string(i) + " has a non-finite coefficient");
    }
    if (!std::isfinite(constraints_[i].rhs))
      throw ValidationError("constraint " + std::to_string(i) + " has a non-finite right-hand side");
  }
}

double MathProgram::objective(std::span<const double> x) const {
  double total = constant_;
  for (std::size_t j = 0; j < variables_.size(); ++j)
    total += variables_[j].linear * x[j] + variables_[j].quadratic * x[j] * x[j];
  return total;
}

double MathProgram::row_activity(int row, std::span<const double> x) const {
  double s = 0.0;
  for (const Term& t : constraints_.at(row).terms) s += t.coef * x[t.var];
  return s;
}

double MathProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const Variable& v = variables_[j];
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
    if (v.kind == VarKind::binary) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  }
  for (int i = 0; i < num_constraints(); ++i) {
    const Constraint& c = constraints_[i];
    double scale = 0.0;
    for (const Term& t : c.terms) scale = std::max(scale, std::abs(t.coef));
    if (scale == 0.0) scale = 1.0;
    const double r = row_activity(i, x) - c.rhs;
    double viol = 0.0;
    switch (c.relation) {
      case Relation::less_equal: viol = r; break;
      case Relation::greater_equal: viol = -r; break;
      case Relation::equal: viol = std::abs(r); break;
    }
    worst = std::max(worst, viol / scale);
  }
  return worst;
}

void MathProgram::write_text(std::ostream& out) const {
  out << "# variables " << variables_.size() << " constraints " << constraints_.size()
      << " constant " << constant_ << '\n';
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const Variable& v = variables_[j];
    out << "var " << j << ' ' << v.name << ' ' << (v.kind == VarKind::binary ? 'B' : 'C') << ' '
        << v.lower << ' ' << v.upper << ' ' << v.linear << ' ' << v.quadratic << '\n';
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& c = constraints_[i];
    out << "row " << i << ' ' << c.family << ' ' << c.period << ' ';
    for (const Term& t : c.terms) out << t.coef << "*x" << t.var << ' ';
    out << (c.relation == Relation::less_equal ? "<=" : c.relation == Relation::equal ? "=" : ">=")
        << ' ' << c.rhs << '\n';
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_limit: return "gap_limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace ewn::opt
