#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewn/opt/solvers.hpp"
#include "ewn/scuc.hpp"

namespace ewn {

/// Forecast settings for one resource class. Without a penetration the case
/// profiles are used as the actuals unchanged.
struct ClassForecast {
  std::optional<double> penetration;
  double capacity_factor = 0.3;
  double variability = 1.0;
  double mae_day_ahead = 0.0;
  double mae_short_term = 0.0;
  bool operator==(const ClassForecast&) const = default;
};

enum class MinuteLog { csv, binary, none };

struct ScenarioConfig {
  std::string name = "scenario";
  std::filesystem::path case_path;
  int start_day = 0;
  int days = 1;
  FlexibilityFlags flex;
  ClassForecast wind, solar, hydro, load;
  std::vector<std::pair<std::string, double>> system_overrides;  // system.csv keys
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "results";
  opt::MipOptions mip;
  int histogram_bins = 50;
  MinuteLog minute_log = MinuteLog::csv;
};

/// Parses "key = value" lines; '#' starts a comment. Relative paths are
/// resolved against `base_dir`. Throws LoadError naming the line.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config of the result yields an equal config.
std::string format_config(const ScenarioConfig& config);

}  // namespace ewn
