#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ewn/error.hpp"
#include "ewn/metrics.hpp"
#include "ewn/scuc.hpp"

namespace ewn {

struct ScenarioConfig;
struct ScenarioResults;

/// Two result trees that were not produced from the same case, dates, seed
/// and forecast settings.
class ComparisonError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// `output_dir / name`.
std::filesystem::path scenario_dir(const ScenarioConfig& config);

/// Canonical JSON text of the settings two compared scenarios must share.
std::string scenario_fingerprint(const ScenarioConfig& config);

/// Writes the result tree under `dir`. Every file is a pure function of the
/// results; no wall-clock data is written. Throws LoadError when a file
/// cannot be written.
void export_report(const ScenarioResults& results, const MetricsReport& metrics, const std::filesystem::path& dir);

/// What a comparison needs from one scenario, in memory or read back from a
/// result tree.
struct StoredScenario {
  std::string name;
  std::string fingerprint;
  FlexibilityFlags flex;
  int histogram_bins = 50;
  MetricsReport metrics;
};

StoredScenario stored_scenario(const ScenarioResults& results, const MetricsReport& metrics);

/// Reads summary.json and the series files of an exported tree.
StoredScenario load_scenario(const std::filesystem::path& dir);

struct ComparisonRow {
  std::string metric;
  std::string unit;
  double flexible = 0.0;
  double conventional = 0.0;
  double difference = 0.0;        // conventional - flexible
  std::optional<double> percent;  // 100 (conventional - flexible) / conventional; empty when undefined
};

struct JointHistogram {
  std::string series;
  Histogram flexible, conventional;  // identical edges
};

struct ComparisonReport {
  std::string flexible_name, conventional_name;
  std::vector<ComparisonRow> rows;
  std::optional<double> withdrawal_percent_difference;
  std::vector<JointHistogram> histograms;

  const ComparisonRow& row(const std::string& metric) const;
};

/// Throws ComparisonError when the fingerprints differ.
ComparisonReport compare_scenarios(const StoredScenario& flexible, const StoredScenario& conventional);

/// comparison.csv, comparison.json and histograms/ under `dir`.
void write_comparison(const ComparisonReport& report, const std::filesystem::path& dir);

}  // namespace ewn
