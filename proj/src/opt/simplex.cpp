#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "ewn/error.hpp"
#include "ewn/opt/solvers.hpp"

namespace ewn::opt {
namespace {

enum : std::int8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;

// Standard form used internally: [A  -I] z = 0 with bounds on every z.
// Structural z_j (j < n) are the program variables, z_{n+i} is the scaled
// activity of row i.
class RevisedSimplex {
 public:
  RevisedSimplex(const MathProgram& program, const LpOptions& options)
      : program_(program), opt_(options) {
    n_ = program.num_variables();
    m_ = program.num_constraints();
    build();
  }

  Solution run(const Basis* warm) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(warm && install_basis(*warm))) slack_basis();

    const long limit = opt_.iteration_limit > 0 ? opt_.iteration_limit
                                                : std::max<long>(20000, 50L * (n_ + m_));
    SolveStatus status = SolveStatus::infeasible;
    int recoveries = 0;
    for (;;) {
      const Outcome out = iterate(limit);
      if (out == Outcome::optimal) {
        // Confirm on a fresh factorization before declaring victory.
        if (!refactor()) {
          if (++recoveries > 5) throw SolverError("LP basis repeatedly singular");
          slack_basis();
          continue;
        }
        compute_basic_values();
        if (max_infeasibility() > opt_.feasibility_tol) {
          if (++recoveries > 5) throw SolverError("LP lost feasibility after refactorization");
          continue;
        }
        status = SolveStatus::optimal;
        break;
      }
      if (out == Outcome::infeasible) {
        if (!refactor()) {
          if (++recoveries > 5) throw SolverError("LP basis repeatedly singular");
          slack_basis();
          continue;
        }
        compute_basic_values();
        if (max_infeasibility() <= opt_.feasibility_tol) continue;
        status = SolveStatus::infeasible;
        if (phase1_stalled_ && ++recoveries <= 5) {
          phase1_stalled_ = false;
          continue;
        }
        break;
      }
      if (out == Outcome::unbounded) {
        status = SolveStatus::unbounded;
        break;
      }
      if (out == Outcome::singular) {
        if (++recoveries > 5) throw SolverError("LP basis repeatedly singular");
        slack_basis();
        continue;
      }
      throw SolverError("LP iteration limit reached (" + std::to_string(limit) + ")");
    }

    Solution sol;
    sol.status = status;
    sol.iterations = iterations_;
    sol.values.assign(x_.begin(), x_.begin() + n_);
    for (int j = 0; j < n_; ++j)  // snap tiny bound overshoot
      sol.values[j] = std::clamp(sol.values[j], lb_[j], ub_[j]);
    if (status == SolveStatus::optimal) {
      sol.objective = program_.objective(sol.values);
      const Eigen::VectorXd y = duals(/*phase1=*/false);
      sol.row_duals.resize(m_);
      for (int i = 0; i < m_; ++i) sol.row_duals[i] = y[i] * row_scale_[i];
      sol.reduced_costs.resize(n_);
      for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = reduced_cost(j, y, false);
    }
    sol.basis.head = head_;
    sol.basis.status = status_;
    sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  }

 private:
  enum class Outcome { optimal, infeasible, unbounded, singular, limit };

  void build() {
    col_start_.assign(n_ + 1, 0);
    row_scale_.assign(m_, 1.0);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (const Term& t : program_.constraints()[i].terms) s = std::max(s, std::abs(t.coef));
      if (s > 0.0) row_scale_[i] = 1.0 / s;
    }
    std::vector<std::vector<std::pair<int, double>>> cols(n_);
    for (int i = 0; i < m_; ++i)
      for (const Term& t : program_.constraints()[i].terms)
        if (t.coef != 0.0) cols[t.var].push_back({i, t.coef * row_scale_[i]});
    for (int j = 0; j < n_; ++j) {
      auto& c = cols[j];
      std::sort(c.begin(), c.end(), [](auto& a, auto& b) { return a.first < b.first; });
      // merge duplicate entries
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (!row_idx_.empty() && static_cast<int>(row_idx_.size()) > col_start_[j] &&
            row_idx_.back() == c[k].first) {
          val_.back() += c[k].second;
        } else {
          row_idx_.push_back(c[k].first);
          val_.push_back(c[k].second);
        }
      }
      col_start_[j + 1] = static_cast<int>(row_idx_.size());
    }

    const int total = n_ + m_;
    lb_.resize(total);
    ub_.resize(total);
    cost_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      const Variable& v = program_.variable(j);
      lb_[j] = v.lower;
      ub_[j] = v.upper;
      cost_[j] = v.linear;
    }
    for (int i = 0; i < m_; ++i) {
      const Constraint& c = program_.constraints()[i];
      const double b = c.rhs * row_scale_[i];
      lb_[n_ + i] = c.relation == Relation::less_equal ? -kInfinity : b;
      ub_[n_ + i] = c.relation == Relation::greater_equal ? kInfinity : b;
    }
    x_.assign(total, 0.0);
    status_.assign(total, kAtLower);
    head_.assign(m_, -1);
    pos_.assign(total, -1);
  }

  void place_nonbasic(int j, std::int8_t preferred) {
    const bool lo = std::isfinite(lb_[j]);
    const bool hi = std::isfinite(ub_[j]);
    std::int8_t s = preferred;
    if (s == kAtLower && !lo) s = hi ? kAtUpper : kFreeZero;
    if (s == kAtUpper && !hi) s = lo ? kAtLower : kFreeZero;
    if (s == kFreeZero && (lo || hi)) s = lo ? kAtLower : kAtUpper;
    if (s == kBasic) s = lo ? kAtLower : (hi ? kAtUpper : kFreeZero);
    status_[j] = s;
    pos_[j] = -1;
    x_[j] = s == kAtLower ? lb_[j] : s == kAtUpper ? ub_[j] : 0.0;
  }

  void slack_basis() {
    for (int j = 0; j < n_; ++j) place_nonbasic(j, kAtLower);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      status_[n_ + i] = kBasic;
      pos_[n_ + i] = i;
    }
    if (!refactor()) throw SolverError("slack basis failed to factorize");
    compute_basic_values();
  }

  bool install_basis(const Basis& basis) {
    if (static_cast<int>(basis.head.size()) != m_ ||
        static_cast<int>(basis.status.size()) != n_ + m_)
      return false;
    std::vector<char> seen(n_ + m_, 0);
    for (int i = 0; i < m_; ++i) {
      const int j = basis.head[i];
      if (j < 0 || j >= n_ + m_ || seen[j]) return false;
      seen[j] = 1;
    }
    for (int j = 0; j < n_ + m_; ++j)
      if (!seen[j]) place_nonbasic(j, basis.status[j] == kBasic ? std::int8_t{kAtLower} : basis.status[j]);
    for (int i = 0; i < m_; ++i) {
      head_[i] = basis.head[i];
      status_[head_[i]] = kBasic;
      pos_[head_[i]] = i;
    }
    if (!refactor()) return false;
    compute_basic_values();
    return true;
  }

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) f(row_idx_[k], val_[k]);
    } else {
      f(j - n_, -1.0);
    }
  }

  bool refactor() {
    Eigen::SparseMatrix<double> basis(m_, m_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m_) * 3);
    for (int i = 0; i < m_; ++i)
      for_column(head_[i], [&](int r, double v) { trip.emplace_back(r, i, v); });
    basis.setFromTriplets(trip.begin(), trip.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    etas_.clear();
    if (lu_.info() != Eigen::Success) return false;
    // Reject numerically singular factors (tiny pivots make SparseLU "succeed").
    const double logdet = lu_.logAbsDeterminant();
    return std::isfinite(logdet);
  }

  Eigen::VectorXd ftran(Eigen::VectorXd rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    for (const Eta& e : etas_) {
      const double xr = x[e.row] / e.pivot;
      if (xr != 0.0)
        for (std::size_t k = 0; k < e.idx.size(); ++k) x[e.idx[k]] -= e.val[k] * xr;
      x[e.row] = xr;
    }
    return x;
  }

  Eigen::VectorXd btran(Eigen::VectorXd c) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = c[it->row];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * c[it->idx[k]];
      c[it->row] = s / it->pivot;
    }
    return lu_.transpose().solve(c);
  }

  void compute_basic_values() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == kBasic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](int r, double v) { rhs[r] -= v * xj; });
    }
    const Eigen::VectorXd xb = ftran(rhs);
    for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
  }

  double infeasibility(int j) const {
    const double tol = opt_.feasibility_tol;
    if (x_[j] < lb_[j] - tol) return lb_[j] - x_[j];
    if (x_[j] > ub_[j] + tol) return x_[j] - ub_[j];
    return 0.0;
  }

  double max_infeasibility() const {
    double w = 0.0;
    for (int i = 0; i < m_; ++i) w = std::max(w, infeasibility(head_[i]));
    return w;
  }

  double phase_cost(int j, bool phase1) const {
    if (!phase1) return cost_[j];
    if (status_[j] != kBasic) return 0.0;
    const double tol = opt_.feasibility_tol;
    if (x_[j] < lb_[j] - tol) return -1.0;
    if (x_[j] > ub_[j] + tol) return 1.0;
    return 0.0;
  }

  Eigen::VectorXd duals(bool phase1) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = phase_cost(head_[i], phase1);
    return btran(std::move(cb));
  }

  double reduced_cost(int j, const Eigen::VectorXd& y, bool phase1) const {
    double d = phase_cost(j, phase1);
    for_column(j, [&](int r, double v) { d -= y[r] * v; });
    return d;
  }

  // Returns entering index and direction (+1 increase, -1 decrease), or -1.
  std::pair<int, int> price(const Eigen::VectorXd& y, bool phase1) const {
    const double tol = opt_.optimality_tol;
    int best = -1;
    int dir = 0;
    double best_score = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const std::int8_t s = status_[j];
      if (s == kBasic || lb_[j] == ub_[j]) continue;
      const double d = reduced_cost(j, y, phase1);
      int dj = 0;
      if (s == kAtLower && d < -tol) dj = 1;
      else if (s == kAtUpper && d > tol) dj = -1;
      else if (s == kFreeZero && std::abs(d) > tol) dj = d < 0 ? 1 : -1;
      if (dj == 0) continue;
      if (bland_) return {j, dj};
      const double score = std::abs(d);
      if (score > best_score) {
        best_score = score;
        best = j;
        dir = dj;
      }
    }
    return {best, dir};
  }

  // Step the entering variable can take before basic row i reaches a bound,
  // given the basic variable's rate of change per unit step. tol relaxes the
  // bound (Harris pass one). Sets *to_lower to the bound that is hit.
  double bound_step(int i, double delta, bool phase1, double tol, bool* to_lower) const {
    const int b = head_[i];
    const double x = x_[b];
    const double ftol = opt_.feasibility_tol;
    const bool below = phase1 && x < lb_[b] - ftol;
    const bool above = phase1 && x > ub_[b] + ftol;
    if (delta < 0.0) {
      if (below) return kInfinity;
      const double bound = above ? ub_[b] : lb_[b];
      if (!std::isfinite(bound)) return kInfinity;
      *to_lower = !above && lb_[b] < ub_[b];
      return std::max(0.0, (x - bound + tol) / -delta);
    }
    if (above) return kInfinity;
    const double bound = below ? lb_[b] : ub_[b];
    if (!std::isfinite(bound)) return kInfinity;
    *to_lower = below && lb_[b] < ub_[b];
    return std::max(0.0, (bound - x + tol) / delta);
  }

  Outcome iterate(long limit) {
    int since_refactor = 0;
    int degenerate = 0;
    bland_ = false;
    for (;;) {
      if (iterations_ >= limit) return Outcome::limit;
      const bool phase1 = max_infeasibility() > opt_.feasibility_tol;
      const Eigen::VectorXd y = duals(phase1);
      const auto [q, dir] = price(y, phase1);
      if (q < 0) {
        if (phase1) {
          phase1_stalled_ = bland_;
          return Outcome::infeasible;
        }
        return Outcome::optimal;
      }

      Eigen::VectorXd aq = Eigen::VectorXd::Zero(m_);
      for_column(q, [&](int r, double v) { aq[r] = v; });
      const Eigen::VectorXd alpha = ftran(std::move(aq));

      // Harris two-pass ratio test.
      const double htol = opt_.feasibility_tol * 0.5;
      double theta_max = kInfinity;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= kPivotTol) continue;
        bool lower = false;
        theta_max = std::min(theta_max, bound_step(i, -dir * alpha[i], phase1, htol, &lower));
      }
      const double flip = (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) ? ub_[q] - lb_[q] : kInfinity;

      int leave = -1;
      bool leave_lower = false;
      double theta = 0.0;
      if (std::isfinite(flip) && flip <= theta_max) {
        theta = flip;
      } else {
        if (!std::isfinite(theta_max)) {
          if (phase1) throw SolverError("phase 1 ray without blocking variable");
          return Outcome::unbounded;
        }
        double best_alpha = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double a = std::abs(alpha[i]);
          if (a <= kPivotTol) continue;
          bool lower = false;
          const double t = bound_step(i, -dir * alpha[i], phase1, 0.0, &lower);
          if (t > theta_max) continue;
          const bool better = bland_ ? (leave < 0 || head_[i] < head_[leave]) : a > best_alpha;
          if (better) {
            best_alpha = a;
            leave = i;
            leave_lower = lower;
            theta = t;
          }
        }
        if (leave < 0) return Outcome::singular;
      }

      ++iterations_;
      if (theta <= 1e-12) {
        if (++degenerate > opt_.degenerate_switch) bland_ = true;
      } else {
        degenerate = 0;
        bland_ = false;
      }

      x_[q] += dir * theta;
      if (theta != 0.0)
        for (int i = 0; i < m_; ++i)
          if (alpha[i] != 0.0) x_[head_[i]] -= dir * theta * alpha[i];

      if (leave < 0) {  // bound flip, basis unchanged
        status_[q] = dir > 0 ? kAtUpper : kAtLower;
        x_[q] = dir > 0 ? ub_[q] : lb_[q];
        continue;
      }

      const int out = head_[leave];
      status_[out] = leave_lower ? kAtLower : kAtUpper;
      x_[out] = leave_lower ? lb_[out] : ub_[out];
      pos_[out] = -1;
      head_[leave] = q;
      status_[q] = kBasic;
      pos_[q] = leave;

      Eta eta;
      eta.row = leave;
      eta.pivot = alpha[leave];
      for (int i = 0; i < m_; ++i)
        if (i != leave && std::abs(alpha[i]) > kDropTol) {
          eta.idx.push_back(i);
          eta.val.push_back(alpha[i]);
        }
      etas_.push_back(std::move(eta));

      if (++since_refactor >= opt_.refactor_interval) {
        since_refactor = 0;
        if (!refactor()) return Outcome::singular;
        compute_basic_values();
      }
    }
  }

  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> idx;
    std::vector<double> val;
  };

  const MathProgram& program_;
  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> col_start_, row_idx_;
  std::vector<double> val_, row_scale_;
  std::vector<double> lb_, ub_, cost_, x_;
  std::vector<std::int8_t> status_;
  std::vector<int> head_, pos_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
  bool bland_ = false;
  bool phase1_stalled_ = false;
};

}  // namespace

Solution solve_lp(const MathProgram& program, const LpOptions& options, const Basis* warm_start) {
  program.validate();
  for (const Variable& v : program.variables()) {
    if (v.kind == VarKind::binary) throw ValidationError("solve_lp called on a program with binaries");
    if (v.quadratic != 0.0) throw ValidationError("solve_lp called on a program with quadratic terms");
  }
  if (program.num_constraints() == 0) {
    // Separable: each variable sits at its cheapest bound.
    Solution sol;
    sol.status = SolveStatus::optimal;
    for (const Variable& v : program.variables()) {
      double x = v.linear > 0 ? v.lower : v.linear < 0 ? v.upper : (std::isfinite(v.lower) ? v.lower : (std::isfinite(v.upper) ? v.upper : 0.0));
      if (!std::isfinite(x)) {
        sol.status = SolveStatus::unbounded;
        x = 0.0;
      }
      sol.values.push_back(x);
      sol.reduced_costs.push_back(v.linear);
    }
    if (sol.status == SolveStatus::optimal) sol.objective = program.objective(sol.values);
    return sol;
  }
  RevisedSimplex simplex(program, options);
  return simplex.run(warm_start);
}

}  // namespace ewn::opt
