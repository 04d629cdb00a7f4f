#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ewn::opt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind : std::uint8_t { continuous, binary };
enum class Relation : std::uint8_t { less_equal, equal, greater_equal };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  VarKind kind = VarKind::continuous;
  double linear = 0.0;
  double quadratic = 0.0;  // coefficient q of q*x^2
  int segments = 0;        // piecewise segments for q; 0 uses the caller default
  int branch_priority = 0; // higher branches first
};

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::string family;  // constraint group, e.g. "balance" or "lfr_up"
  int period = -1;     // time index the row belongs to, -1 if none
  std::vector<Term> terms;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// Sparse mixed-integer program with a separable convex quadratic objective:
///   min  constant + sum_j (linear_j x_j + quadratic_j x_j^2)
///   s.t. rows (<=, =, >=), lower <= x <= upper, binaries in {0,1}.
class MathProgram {
 public:
  int add_variable(std::string name, double lower, double upper,
                   VarKind kind = VarKind::continuous);
  int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarKind::binary); }

  void add_linear(int var, double coef) { variables_.at(var).linear += coef; }
  void add_quadratic(int var, double coef) { variables_.at(var).quadratic += coef; }
  void add_constant(double value) { constant_ += value; }

  int add_constraint(std::string family, int period, std::vector<Term> terms,
                     Relation relation, double rhs);

  Variable& variable(int j) { return variables_.at(j); }
  const Variable& variable(int j) const { return variables_.at(j); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  Constraint& constraint(int i) { return constraints_.at(i); }
  const Constraint& constraint(int i) const { return constraints_.at(i); }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_binaries() const;
  bool has_quadratic() const;
  double objective_constant() const { return constant_; }

  /// Throws ValidationError on nonconvexity, bad bounds or dangling terms.
  void validate() const;

  double objective(std::span<const double> x) const;
  double row_activity(int row, std::span<const double> x) const;

  /// Largest violation over rows (divided by the row's max |coef|), bounds,
  /// and integrality.
  double max_violation(std::span<const double> x) const;

  /// Plain-text listing used for external cross-checks.
  void write_text(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  double constant_ = 0.0;
};

enum class SolveStatus : std::uint8_t { optimal, gap_limit, infeasible, unbounded };

const char* to_string(SolveStatus status);

/// Simplex basis snapshot used to warm-start a related LP.
struct Basis {
  std::vector<int> head;            // basic variable per row (structural j < n, row var n+i)
  std::vector<std::int8_t> status;  // per variable: 0 basic, 1 lower, 2 upper, 3 free-at-zero
  bool empty() const { return head.empty(); }
};

struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  double objective = kInfinity;
  std::vector<double> values;
  std::vector<double> row_duals;       // LP only: d objective / d rhs
  std::vector<double> reduced_costs;   // LP only, structural variables
  double mip_gap = 0.0;
  long nodes = 0;
  long iterations = 0;
  double wall_time = 0.0;              // seconds
  std::vector<double> incumbent_history;
  Basis basis;

  bool ok() const { return status == SolveStatus::optimal || status == SolveStatus::gap_limit; }
};

}  // namespace ewn::opt
