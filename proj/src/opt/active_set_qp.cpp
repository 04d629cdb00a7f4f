#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Dense>

#include "ewn/error.hpp"
#include "ewn/opt/solvers.hpp"

namespace ewn::opt {
namespace {

// Constraint ids: [0, m) rows, [m, m+n) lower bounds, [m+n, m+2n) upper bounds.
// Every inequality is oriented as a^T x >= b.
class ActiveSetQp {
 public:
  ActiveSetQp(const MathProgram& p, const QpOptions& opt) : p_(p), opt_(opt) {
    n_ = p.num_variables();
    m_ = p.num_constraints();
    A_ = Eigen::MatrixXd::Zero(m_, n_);
    for (int i = 0; i < m_; ++i)
      for (const Term& t : p.constraints()[i].terms) A_(i, t.var) += t.coef;
    c_.resize(n_);
    h_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      c_[j] = p.variable(j).linear;
      h_[j] = 2.0 * p.variable(j).quadratic;
    }
  }

  Solution run(const Solution& start) {
    x_ = Eigen::Map<const Eigen::VectorXd>(start.values.data(), n_);
    in_w_.assign(m_ + 2 * n_, 0);
    seed_working_set(start.basis);

    const long limit = opt_.iteration_limit > 0 ? opt_.iteration_limit : 50L * (n_ + m_) + 200;
    long it = 0;
    for (;; ++it) {
      if (it > limit) throw SolverError("active-set QP iteration limit reached");
      const Eigen::VectorXd g = c_ + h_.cwiseProduct(x_);
      const double gscale = 1.0 + g.cwiseAbs().maxCoeff();

      const int k = static_cast<int>(w_.size());
      Eigen::MatrixXd AW(k, n_);
      for (int r = 0; r < k; ++r) AW.row(r) = normal(w_[r]).transpose();

      Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n_, n_);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr;
      if (k > 0) {
        qr.compute(AW.transpose());
        Q = qr.householderQ() * Eigen::MatrixXd::Identity(n_, n_);
      }
      const int nz = n_ - k;
      Eigen::VectorXd p = Eigen::VectorXd::Zero(n_);
      double alpha_max = 1.0;
      if (nz > 0) {
        const Eigen::MatrixXd Z = Q.rightCols(nz);
        const Eigen::VectorXd gz = Z.transpose() * g;
        if (gz.cwiseAbs().maxCoeff() > opt_.tolerance * gscale) {
          const Eigen::MatrixXd hz = Z.transpose() * h_.asDiagonal() * Z;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hz);
          const Eigen::VectorXd lam = eig.eigenvalues();
          const Eigen::MatrixXd V = eig.eigenvectors();
          const Eigen::VectorXd gt = V.transpose() * gz;
          const double lam_tol = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
          Eigen::VectorXd flat = Eigen::VectorXd::Zero(nz);
          bool has_flat = false;
          for (int i = 0; i < nz; ++i)
            if (lam[i] <= lam_tol && std::abs(gt[i]) > opt_.tolerance * gscale) {
              flat[i] = -gt[i];
              has_flat = true;
            }
          Eigen::VectorXd pt = Eigen::VectorXd::Zero(nz);
          if (has_flat) {
            pt = flat;  // zero-curvature descent: step until blocked
            alpha_max = kInfinity;
          } else {
            for (int i = 0; i < nz; ++i)
              if (lam[i] > lam_tol) pt[i] = -gt[i] / lam[i];
          }
          p = Z * (V * pt);
        }
      }

      const double xscale = 1.0 + x_.cwiseAbs().maxCoeff();
      if (p.cwiseAbs().maxCoeff() <= 1e-13 * xscale) {
        // Stationary on the working set: check multiplier signs.
        if (k == 0) break;
        const Eigen::VectorXd mu = qr.solve(g);
        int drop = -1;
        double worst = -opt_.tolerance * gscale;
        for (int r = 0; r < k; ++r) {
          if (is_equality(w_[r])) continue;
          if (mu[r] < worst) {
            worst = mu[r];
            drop = r;
          }
        }
        if (drop < 0) break;
        in_w_[w_[drop]] = 0;
        w_.erase(w_.begin() + drop);
        continue;
      }

      // Ratio test over constraints outside the working set.
      double alpha = alpha_max;
      int block = -1;
      const double ptol = 1e-12 * p.cwiseAbs().maxCoeff();
      for (int id = 0; id < m_ + 2 * n_; ++id) {
        if (in_w_[id] || !exists(id)) continue;
        const double ap = normal_dot(id, p);
        const double slack = normal_dot(id, x_) - rhs(id);  // >= 0 when satisfied
        double step = kInfinity;
        if (ap < -ptol) step = std::max(0.0, slack / -ap);
        else if (is_equality(id) && ap > ptol) step = std::max(0.0, -slack / ap);
        if (step < alpha) {
          alpha = step;
          block = id;
        }
      }
      if (!std::isfinite(alpha)) {
        status_ = SolveStatus::unbounded;
        break;
      }
      x_ += alpha * p;
      if (block >= 0) {
        if (block >= m_) {  // land exactly on the bound
          const int j = (block - m_) % n_;
          x_[j] = block < m_ + n_ ? p_.variable(j).lower : p_.variable(j).upper;
        }
        in_w_[block] = 1;
        w_.push_back(block);
      }
    }

    Solution sol;
    sol.status = status_;
    sol.iterations = it;
    sol.values.assign(x_.data(), x_.data() + n_);
    for (int j = 0; j < n_; ++j)
      sol.values[j] = std::clamp(sol.values[j], p_.variable(j).lower, p_.variable(j).upper);
    if (status_ == SolveStatus::optimal) sol.objective = p_.objective(sol.values);
    return sol;
  }

 private:
  bool exists(int id) const {
    if (id < m_) return true;
    const int j = (id - m_) % n_;
    const Variable& v = p_.variable(j);
    if (v.lower == v.upper) return id < m_ + n_;  // one equality stands for both bounds
    return id < m_ + n_ ? std::isfinite(v.lower) : std::isfinite(v.upper);
  }

  bool is_equality(int id) const {
    if (id < m_) return p_.constraints()[id].relation == Relation::equal;
    const Variable& v = p_.variable((id - m_) % n_);
    return v.lower == v.upper;
  }

  double sign(int id) const {
    if (id < m_) return p_.constraints()[id].relation == Relation::less_equal ? -1.0 : 1.0;
    return id < m_ + n_ ? 1.0 : -1.0;
  }

  Eigen::VectorXd normal(int id) const {
    if (id < m_) return sign(id) * A_.row(id).transpose();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    e[(id - m_) % n_] = sign(id);
    return e;
  }

  double normal_dot(int id, const Eigen::VectorXd& v) const {
    if (id < m_) return sign(id) * A_.row(id).dot(v);
    return sign(id) * v[(id - m_) % n_];
  }

  double rhs(int id) const {
    if (id < m_) return sign(id) * p_.constraints()[id].rhs;
    const Variable& v = p_.variable((id - m_) % n_);
    return id < m_ + n_ ? v.lower : -v.upper;
  }

  void add(int id) {
    if (in_w_[id]) return;
    in_w_[id] = 1;
    w_.push_back(id);
  }

  // The LP vertex's nonbasic set is linearly independent by construction.
  void seed_working_set(const Basis& basis) {
    if (static_cast<int>(basis.status.size()) != n_ + m_) return;
    for (int j = 0; j < n_; ++j) {
      const Variable& v = p_.variable(j);
      if (basis.status[j] == 1 && std::isfinite(v.lower)) add(m_ + j);
      else if (basis.status[j] == 2 && std::isfinite(v.upper)) add(v.lower == v.upper ? m_ + j : m_ + n_ + j);
    }
    for (int i = 0; i < m_; ++i)
      if (basis.status[n_ + i] != 0) add(i);
  }

  const MathProgram& p_;
  QpOptions opt_;
  int n_ = 0, m_ = 0;
  Eigen::MatrixXd A_;
  Eigen::VectorXd c_, h_, x_;
  std::vector<int> w_;
  std::vector<char> in_w_;
  SolveStatus status_ = SolveStatus::optimal;
};

}  // namespace

Solution solve_qp(const MathProgram& program, const QpOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  program.validate();
  for (const Variable& v : program.variables())
    if (v.kind == VarKind::binary) throw ValidationError("solve_qp called on a program with binaries");

  MathProgram linear = program;
  for (int j = 0; j < linear.num_variables(); ++j) linear.variable(j).quadratic = 0.0;
  Solution start = solve_lp(linear, options.lp);
  if (start.status == SolveStatus::unbounded) {
    for (int j = 0; j < linear.num_variables(); ++j) linear.variable(j).linear = 0.0;
    start = solve_lp(linear, options.lp);
  }
  if (start.status == SolveStatus::infeasible) return start;
  if (!program.has_quadratic()) {
    start.objective = program.objective(start.values);
    return start;
  }
  ActiveSetQp qp(program, options);
  Solution sol = qp.run(start);
  sol.iterations += start.iterations;
  sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

}  // namespace ewn::opt
