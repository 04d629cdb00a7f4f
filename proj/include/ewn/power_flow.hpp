#pragma once

#include <memory>
#include <vector>

#include "ewn/error.hpp"
#include "ewn/grid_model.hpp"

namespace ewn {

/// MW per per-unit susceptance-radian.
inline constexpr double kBaseMva = 100.0;

/// The network splits into more than one connected component.
class IslandingError : public ValidationError {
 public:
  IslandingError(const std::string& what, std::vector<std::vector<int>> components)
      : ValidationError(what), components_(std::move(components)) {}
  /// Dense bus indices of each component, smallest first.
  const std::vector<std::vector<int>>& components() const { return components_; }

 private:
  std::vector<std::vector<int>> components_;
};

struct PowerFlowResult {
  std::vector<double> angles;  // rad, slack bus at 0
  std::vector<double> flows;   // MW, positive from -> to
  double slack_power = 0.0;    // MW injected at the slack bus to close the balance
};

/// Lossless DC power flow with the reduced susceptance matrix factorized once.
class DcPowerFlow {
 public:
  DcPowerFlow(const GridCase& c, int slack_bus);
  ~DcPowerFlow();
  DcPowerFlow(DcPowerFlow&&) noexcept;
  DcPowerFlow& operator=(DcPowerFlow&&) noexcept;

  /// `injections` are net MW per bus.
  PowerFlowResult solve(const std::vector<double>& injections) const;
  int slack_bus() const { return slack_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int slack_ = 0;
};

PowerFlowResult dc_power_flow(const GridCase& c, const std::vector<double>& injections, int slack_bus);

/// Lowest-numbered bus hosting a committed generator; bus 0 if none is.
int choose_slack_bus(const GridCase& c, const std::vector<bool>& committed);

/// Throws IslandingError when the lines do not connect every bus.
void check_connected(const GridCase& c);

}  // namespace ewn
