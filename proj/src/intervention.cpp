#include "epifit/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace epifit {

double rect_weight(double t, const RectShockParams& shock) {
  return (t >= shock.a && t <= shock.b) ? 1.0 + shock.c : 1.0;
}

double rect_integral(double t, const RectShockParams& shock) {
  return t + shock.c * std::max(0.0, std::min(t, shock.b) - shock.a);
}

double seasonal_weight(double t, const SeasonalParams& params) {
  const double phase = 2.0 * std::numbers::pi * t / params.s;
  return 1.0 + params.alpha1 * std::cos(phase) + params.alpha2 * std::sin(phase);
}

double seasonal_integral(double t, const SeasonalParams& params) {
  if (!(params.s > 0.0)) {
    throw std::invalid_argument("seasonal period s must be positive");
  }
  const double scale = params.s / (2.0 * std::numbers::pi);
  const double phase = 2.0 * std::numbers::pi * t / params.s;
  return t + params.alpha1 * scale * std::sin(phase) +
         params.alpha2 * scale * (1.0 - std::cos(phase));
}

SwabStats swab_stats(std::span<const double> daily_swabs, SdConvention convention) {
  const std::size_t n = daily_swabs.size();
  if (n < 2) {
    throw std::invalid_argument("swab_stats: need at least two days of swabs");
  }
  double mean = 0.0;
  for (double b : daily_swabs) mean += b;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double b : daily_swabs) ss += (b - mean) * (b - mean);
  const double denom = convention == SdConvention::population ? static_cast<double>(n)
                                                              : static_cast<double>(n - 1);
  const double sd = std::sqrt(ss / denom);
  if (!(sd > 0.0)) {
    throw std::invalid_argument("swab_stats: constant swab series has zero spread");
  }
  return {mean, sd};
}

double swab_weight(double swabs, const SwabStats& stats, double xi) {
  return 1.0 + xi * (swabs - stats.mu_B) / stats.sigma_B;
}

double swab_integral(std::size_t t, std::span<const double> daily_swabs, const SwabStats& stats,
                     double xi) {
  if (t > daily_swabs.size()) {
    throw std::out_of_range("swab_integral: day " + std::to_string(t) +
                            " is beyond the swab schedule of " +
                            std::to_string(daily_swabs.size()) + " days");
  }
  double total = 0.0;
  for (std::size_t u = 0; u < t; ++u) {
    total += swab_weight(daily_swabs[u], stats, xi);
  }
  return total;
}

SwabSchedule::SwabSchedule(std::span<const double> daily_swabs, const SwabStats& stats)
    : swabs_(daily_swabs.begin(), daily_swabs.end()), stats_(stats) {
  if (!(stats.sigma_B > 0.0)) {
    throw std::invalid_argument("SwabSchedule: sigma_B must be positive");
  }
  standardized_sum_.resize(swabs_.size() + 1, 0.0);
  for (std::size_t u = 0; u < swabs_.size(); ++u) {
    standardized_sum_[u + 1] = standardized_sum_[u] + (swabs_[u] - stats_.mu_B) / stats_.sigma_B;
  }
}

SwabSchedule SwabSchedule::from_window(std::span<const double> daily_swabs,
                                       SdConvention convention) {
  return SwabSchedule(daily_swabs, swab_stats(daily_swabs, convention));
}

SwabSchedule SwabSchedule::extended(std::span<const double> extra_daily_swabs) const {
  std::vector<double> all = swabs_;
  all.insert(all.end(), extra_daily_swabs.begin(), extra_daily_swabs.end());
  return SwabSchedule(all, stats_);
}

double SwabSchedule::cumulative_weight(double t, double xi) const {
  if (t <= 0.0) return t;
  const double last = static_cast<double>(swabs_.size());
  if (t > last) {
    throw std::out_of_range("swab schedule covers " + std::to_string(swabs_.size()) +
                            " days, requested t=" + std::to_string(t));
  }
  const auto whole = static_cast<std::size_t>(std::floor(t));
  double standardized = standardized_sum_[whole];
  const double frac = t - static_cast<double>(whole);
  if (frac > 0.0) {
    standardized += frac * (standardized_sum_[whole + 1] - standardized_sum_[whole]);
  }
  return t + xi * standardized;
}

}  // namespace epifit
