#include "ewn/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ewn/error.hpp"

namespace ewn {
namespace {

double mean(const Series& s) {
  return s.empty() ? 0.0 : std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) ^ index);
}

Series scale_profile(const Series& raw, const ForecastParams& params, double total_load_energy, double dt_hours) {
  if (params.penetration < 0 || params.variability_scale < 0)
    throw ParameterError("penetration and variability scale must be nonnegative");
  if (!(total_load_energy > 0)) throw ParameterError("total load energy must be positive");
  if (raw.empty()) throw ParameterError("degenerate profile: empty series");
  const double m = mean(raw);
  if (!(m > 0)) throw ParameterError("degenerate profile: zero energy");
  Series x(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) x[i] = std::max(0.0, 1.0 + params.variability_scale * (raw[i] / m - 1.0));
  const double mx = mean(x);  // clipping at zero can move the mean off 1
  const double level = params.penetration * total_load_energy / (static_cast<double>(raw.size()) * dt_hours);
  for (double& v : x) v = v / mx * level;
  return x;
}

double capacity_for(const Series& scaled, double capacity_factor) {
  if (!(capacity_factor > 0 && capacity_factor <= 1)) throw ParameterError("capacity factor must lie in (0, 1]");
  const double peak = scaled.empty() ? 0.0 : *std::max_element(scaled.begin(), scaled.end());
  return std::max(mean(scaled) / capacity_factor, peak);
}

Series block_average(const Series& actual, int resolution) {
  if (resolution < 1 || actual.size() % resolution != 0)
    throw DimensionError("resolution " + std::to_string(resolution) + " does not divide series length " +
                         std::to_string(actual.size()));
  Series out(actual.size() / resolution);
  for (std::size_t b = 0; b < out.size(); ++b) {
    double s = 0.0;
    for (int k = 0; k < resolution; ++k) s += actual[b * resolution + k];
    out[b] = s / resolution;
  }
  return out;
}

double relative_mae(const Series& forecast, const Series& actual, int resolution) {
  const Series avg = block_average(actual, resolution);
  if (forecast.size() != avg.size()) throw DimensionError("forecast length does not match the block count");
  const double m = mean(actual);
  if (!(m > 0)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < avg.size(); ++i) s += std::abs(forecast[i] - avg[i]);
  return s / static_cast<double>(avg.size()) / m;
}

Series synthesize_forecast(const Series& actual, double target_mae, int resolution, std::uint64_t seed,
                           double capacity) {
  if (target_mae < 0) throw ParameterError("target MAE must be nonnegative");
  const Series avg = block_average(actual, resolution);
  const double m = mean(actual);
  if (target_mae == 0 || !(m > 0)) return avg;

  std::mt19937_64 rng(seed);
  Series noise(avg.size());
  double e = 0.0;
  for (double& v : noise) {
    // Uniform in [-1, 1) from the top 53 bits; portable across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    e = 0.9 * e + u;
    v = e;
  }
  auto forecast = [&](double scale) {
    Series f(avg.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::clamp(avg[i] + scale * noise[i], 0.0, capacity);
    return f;
  };
  auto mae = [&](double scale) { return relative_mae(forecast(scale), actual, resolution); };

  // The clipped MAE is nondecreasing in the scale.
  double lo = 0.0, hi = m;
  for (int k = 0; k < 200 && mae(hi) < target_mae; ++k) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mae(mid) < target_mae) lo = mid;
    else hi = mid;
  }
  return forecast(hi);
}

ForecastSet build_forecast(const Series& actual, const ForecastParams& params, double capacity,
                           const SystemConfig& config) {
  ForecastSet fs;
  fs.actual = actual;
  const int hour = static_cast<int>(std::lround(60.0 * config.t_h));
  fs.day_ahead = synthesize_forecast(actual, params.mae_day_ahead, hour, derive_seed(params.seed, 1, 0), capacity);
  fs.short_term =
      synthesize_forecast(actual, params.mae_short_term, config.t_m, derive_seed(params.seed, 2, 0), capacity);
  return fs;
}

}  // namespace ewn
