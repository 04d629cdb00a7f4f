#include "ewn/power_flow.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/SparseLU>

namespace ewn {

void check_connected(const GridCase& c) {
  const int n = static_cast<int>(c.buses.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const Line& ln : c.lines) {
    const int a = find(ln.from_bus), b = find(ln.to_bus);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<int>> groups(n);
  for (int b = 0; b < n; ++b) groups[find(b)].push_back(b);
  std::vector<std::vector<int>> comps;
  for (auto& g : groups)
    if (!g.empty()) comps.push_back(std::move(g));
  if (comps.size() <= 1) return;
  std::ostringstream msg;
  msg << "network has " << comps.size() << " islands:";
  for (const auto& comp : comps) {
    msg << " {";
    for (std::size_t i = 0; i < comp.size(); ++i) msg << (i ? "," : "") << c.buses[comp[i]].external_id;
    msg << "}";
  }
  throw IslandingError(msg.str(), std::move(comps));
}

struct DcPowerFlow::Impl {
  const GridCase* c = nullptr;
  std::vector<int> reduced;  // bus -> row of the reduced system, -1 for the slack
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

DcPowerFlow::DcPowerFlow(const GridCase& c, int slack_bus) : impl_(std::make_unique<Impl>()), slack_(slack_bus) {
  const int n = static_cast<int>(c.buses.size());
  if (slack_bus < 0 || slack_bus >= n) throw ParameterError("slack bus index out of range");
  check_connected(c);
  impl_->c = &c;
  impl_->reduced.assign(n, -1);
  int r = 0;
  for (int b = 0; b < n; ++b)
    if (b != slack_bus) impl_->reduced[b] = r++;
  std::vector<Eigen::Triplet<double>> trip;
  for (const Line& ln : c.lines) {
    const double y = kBaseMva * ln.susceptance;
    const int f = impl_->reduced[ln.from_bus], t = impl_->reduced[ln.to_bus];
    if (f >= 0) trip.emplace_back(f, f, y);
    if (t >= 0) trip.emplace_back(t, t, y);
    if (f >= 0 && t >= 0) {
      trip.emplace_back(f, t, -y);
      trip.emplace_back(t, f, -y);
    }
  }
  Eigen::SparseMatrix<double> B(r, r);
  B.setFromTriplets(trip.begin(), trip.end());
  if (r > 0) {
    impl_->lu.compute(B);
    if (impl_->lu.info() != Eigen::Success) throw SolverError("reduced susceptance matrix is singular");
  }
}

DcPowerFlow::~DcPowerFlow() = default;
DcPowerFlow::DcPowerFlow(DcPowerFlow&&) noexcept = default;
DcPowerFlow& DcPowerFlow::operator=(DcPowerFlow&&) noexcept = default;

PowerFlowResult DcPowerFlow::solve(const std::vector<double>& injections) const {
  const GridCase& c = *impl_->c;
  const int n = static_cast<int>(c.buses.size());
  if (static_cast<int>(injections.size()) != n) throw DimensionError("injection vector does not match the bus count");
  PowerFlowResult out;
  out.angles.assign(n, 0.0);
  if (n > 1) {
    Eigen::VectorXd rhs(n - 1);
    for (int b = 0; b < n; ++b)
      if (impl_->reduced[b] >= 0) rhs[impl_->reduced[b]] = injections[b];
    const Eigen::VectorXd theta = impl_->lu.solve(rhs);
    for (int b = 0; b < n; ++b)
      if (impl_->reduced[b] >= 0) out.angles[b] = theta[impl_->reduced[b]];
  }
  for (const Line& ln : c.lines)
    out.flows.push_back(kBaseMva * ln.susceptance * (out.angles[ln.from_bus] - out.angles[ln.to_bus]));
  double total = 0.0;
  for (double p : injections) total += p;
  out.slack_power = -total;
  return out;
}

PowerFlowResult dc_power_flow(const GridCase& c, const std::vector<double>& injections, int slack_bus) {
  return DcPowerFlow(c, slack_bus).solve(injections);
}

int choose_slack_bus(const GridCase& c, const std::vector<bool>& committed) {
  int best = -1;
  for (std::size_t k = 0; k < c.generators.size() && k < committed.size(); ++k)
    if (committed[k] && (best < 0 || c.generators[k].bus < best)) best = c.generators[k].bus;
  return best < 0 ? 0 : best;
}

}  // namespace ewn
