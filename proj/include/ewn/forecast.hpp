#pragma once

#include <cstdint>

#include "ewn/grid_model.hpp"

namespace ewn {

struct ForecastParams {
  double penetration = 0.0;        // share of total load energy
  double capacity_factor = 0.3;
  double variability_scale = 1.0;  // multiplies deviations about the mean
  double mae_day_ahead = 0.0;      // fraction of mean actual power
  double mae_short_term = 0.0;
  std::uint64_t seed = 0;
};

/// day_ahead has one value per SCUC period, short_term one per SCED step.
struct ForecastSet {
  Series day_ahead;
  Series short_term;
  Series actual;
};

/// Normalizes `raw` to unit mean, applies the variability scale, then sets
/// the energy to penetration * total_load_energy. `dt_hours` is the sample
/// spacing of `raw`.
Series scale_profile(const Series& raw, const ForecastParams& params, double total_load_energy,
                     double dt_hours = 1.0 / 60.0);

/// Nameplate consistent with a scaled profile and a capacity factor.
double capacity_for(const Series& scaled, double capacity_factor);

/// Block averages of `actual` over `resolution` minutes.
Series block_average(const Series& actual, int resolution);

/// Block-averaged actuals plus AR(1) noise (coefficient 0.9, uniform
/// innovations from mt19937_64), scaled by bisection so the clipped
/// forecast's MAE against the block averages equals target_mae * mean(actual).
Series synthesize_forecast(const Series& actual, double target_mae, int resolution, std::uint64_t seed,
                           double capacity);

/// Mean of |forecast - block_average(actual)| divided by mean(actual).
double relative_mae(const Series& forecast, const Series& actual, int resolution);

ForecastSet build_forecast(const Series& actual, const ForecastParams& params, double capacity,
                           const SystemConfig& config);

/// Independent stream seeds for resource `index` of class `stream`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

}  // namespace ewn
