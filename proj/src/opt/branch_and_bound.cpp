#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "ewn/error.hpp"
#include "ewn/opt/solvers.hpp"

namespace ewn::opt {
namespace {

struct Node {
  double bound = 0.0;
  long id = 0;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0 or 1 fixed
  std::shared_ptr<const Basis> basis;
  std::vector<double> values;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const LinearizedProgram& lin, const MipOptions& opt) : lin_(lin), opt_(opt), relax_(lin.program) {
    for (int j = 0; j < relax_.num_variables(); ++j) {
      Variable& v = relax_.variable(j);
      if (v.kind != VarKind::binary) continue;
      binaries_.push_back(j);
      v.kind = VarKind::continuous;
      v.lower = std::max(0.0, v.lower);
      v.upper = std::min(1.0, v.upper);
    }
    base_lower_.resize(binaries_.size());
    base_upper_.resize(binaries_.size());
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      base_lower_[b] = relax_.variable(binaries_[b]).lower;
      base_upper_[b] = relax_.variable(binaries_[b]).upper;
    }
  }

  Solution run() {
    const auto t0 = std::chrono::steady_clock::now();
    Solution out;
    auto root = std::make_shared<Node>();
    root->fix.assign(binaries_.size(), -1);
    root->id = next_id_++;
    Solution r = solve_node(*root, nullptr);
    if (r.status == SolveStatus::unbounded) {
      out.status = SolveStatus::unbounded;
      out.nodes = nodes_;
      return out;
    }
    if (r.status == SolveStatus::infeasible) {
      out.status = SolveStatus::infeasible;
      out.nodes = nodes_;
      return finish(out, t0);
    }
    root->bound = r.objective;
    root->basis = std::make_shared<const Basis>(std::move(r.basis));
    root->values = std::move(r.values);

    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
    if (!try_incumbent(*root)) {
      if (opt_.dive_heuristic) dive(*root);
      open.push(root);
    }

    bool limit_hit = false;
    while (!open.empty()) {
      const double lb = open.top()->bound;
      if (has_incumbent() && lb >= incumbent_obj_ - prune_tol()) {
        open = {};
        break;
      }
      if (has_incumbent() && gap(lb) <= opt_.gap_limit) break;
      if (nodes_ >= opt_.node_limit) {
        limit_hit = true;
        break;
      }
      std::shared_ptr<Node> node = open.top();
      open.pop();
      if (has_incumbent() && node->bound >= incumbent_obj_ - prune_tol()) continue;

      const int b = select_branch(node->values);
      if (b < 0) continue;  // integral nodes were consumed by try_incumbent
      const double frac = node->values[binaries_[b]];
      // Child nearer the relaxation value first.
      const std::int8_t first = frac >= 0.5 ? 1 : 0;
      for (std::int8_t val : {first, static_cast<std::int8_t>(1 - first)}) {
        auto child = std::make_shared<Node>();
        child->fix = node->fix;
        child->fix[b] = val;
        child->id = next_id_++;
        Solution cs = solve_node(*child, node->basis.get());
        if (cs.status != SolveStatus::optimal) continue;
        child->bound = std::max(cs.objective, node->bound);
        child->basis = std::make_shared<const Basis>(std::move(cs.basis));
        child->values = std::move(cs.values);
        if (has_incumbent() && child->bound >= incumbent_obj_ - prune_tol()) continue;
        if (try_incumbent(*child)) continue;
        open.push(std::move(child));
      }
    }

    out.nodes = nodes_;
    if (!has_incumbent()) {
      if (limit_hit) throw SolverError("node limit reached without an integer-feasible point");
      out.status = SolveStatus::infeasible;
      return finish(out, t0);
    }
    const double lb = open.empty() ? incumbent_obj_ : std::min(open.top()->bound, incumbent_obj_);
    out.mip_gap = std::max(0.0, gap(lb));
    out.status = open.empty() ? SolveStatus::optimal : SolveStatus::gap_limit;
    out.objective = incumbent_obj_;
    out.values = lin_.recover(incumbent_);
    out.incumbent_history = history_;
    return finish(out, t0);
  }

 private:
  bool has_incumbent() const { return !incumbent_.empty(); }
  double prune_tol() const { return 1e-9 * std::max(1.0, std::abs(incumbent_obj_)); }
  double gap(double lb) const { return (incumbent_obj_ - lb) / std::max(1.0, std::abs(incumbent_obj_)); }

  Solution finish(Solution& s, std::chrono::steady_clock::time_point t0) {
    s.iterations = iterations_;
    s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(s);
  }

  Solution solve_node(const Node& node, const Basis* warm) {
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      Variable& v = relax_.variable(binaries_[b]);
      if (node.fix[b] < 0) {
        v.lower = base_lower_[b];
        v.upper = base_upper_[b];
      } else {
        v.lower = v.upper = node.fix[b];
      }
    }
    ++nodes_;
    Solution s = solve_lp(relax_, opt_.lp, warm);
    iterations_ += s.iterations;
    return s;
  }

  double fractionality(double x) const { return std::abs(x - std::round(x)); }

  // Highest priority, then most fractional, then lowest index.
  int select_branch(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = 0.0;
    int best_pri = 0;
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      const double f = fractionality(x[binaries_[b]]);
      if (f <= opt_.integrality_tol) continue;
      const int pri = lin_.program.variable(binaries_[b]).branch_priority;
      if (best < 0 || pri > best_pri || (pri == best_pri && f > best_frac + 1e-12)) {
        best = static_cast<int>(b);
        best_frac = f;
        best_pri = pri;
      }
    }
    return best;
  }

  // An integral relaxation is re-solved with binaries fixed exactly, so the
  // stored incumbent satisfies every row with exact 0/1 values.
  bool try_incumbent(const Node& node) {
    if (select_branch(node.values) >= 0) return false;
    Node fixed;
    fixed.fix = node.fix;
    for (std::size_t b = 0; b < binaries_.size(); ++b)
      fixed.fix[b] = static_cast<std::int8_t>(std::lround(node.values[binaries_[b]]));
    Solution s = solve_node(fixed, node.basis.get());
    if (s.status != SolveStatus::optimal) return true;
    if (!has_incumbent() || s.objective < incumbent_obj_ - prune_tol()) {
      incumbent_obj_ = s.objective;
      incumbent_ = std::move(s.values);
      for (std::size_t b = 0; b < binaries_.size(); ++b) incumbent_[binaries_[b]] = fixed.fix[b];
      history_.push_back(incumbent_obj_);
    }
    return true;
  }

  // Repeatedly rounds the branching candidate and re-solves; backs off to the
  // other value once, abandons the dive on a second failure.
  void dive(const Node& root) {
    Node cur;
    cur.fix = root.fix;
    std::shared_ptr<const Basis> basis = root.basis;
    std::vector<double> x = root.values;
    for (std::size_t step = 0; step <= binaries_.size(); ++step) {
      const int b = select_branch(x);
      if (b < 0) {
        cur.values = x;
        cur.basis = basis;
        try_incumbent(cur);
        return;
      }
      const std::int8_t first = x[binaries_[b]] >= 0.5 ? 1 : 0;
      bool moved = false;
      for (std::int8_t val : {first, static_cast<std::int8_t>(1 - first)}) {
        cur.fix[b] = val;
        Solution s = solve_node(cur, basis.get());
        if (s.status != SolveStatus::optimal) continue;
        if (has_incumbent() && s.objective >= incumbent_obj_ - prune_tol()) return;
        basis = std::make_shared<const Basis>(std::move(s.basis));
        x = std::move(s.values);
        moved = true;
        break;
      }
      if (!moved) return;
    }
  }

  const LinearizedProgram& lin_;
  MipOptions opt_;
  MathProgram relax_;
  std::vector<int> binaries_;
  std::vector<double> base_lower_, base_upper_;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInfinity;
  std::vector<double> history_;
  long nodes_ = 0;
  long next_id_ = 0;
  long iterations_ = 0;
};

}  // namespace

Solution solve_miqp(const MathProgram& program, const MipOptions& options) {
  if (options.gap_limit < 0.0) throw ParameterError("gap limit must be nonnegative");
  if (options.node_limit < 1) throw ParameterError("node limit must be positive");
  const LinearizedProgram lin = linearize_quadratics(program, options.segments);
  BranchAndBound bb(lin, options);
  return bb.run();
}

}  // namespace ewn::opt
