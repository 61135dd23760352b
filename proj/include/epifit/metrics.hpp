#pragma once

// Goodness-of-fit summaries and forecasts.

#include <span>
#include <string_view>
#include <vector>

#include "epifit/estimation.hpp"
#include "epifit/region_series.hpp"

namespace epifit {

enum class BicConvention {
  variance_counted,  // n ln(RSS/n) + (k+1) ln n
  k_only,            // n ln(RSS/n) + k ln n
  full_gaussian,     // n (ln(2 pi RSS/n) + 1) + (k+1) ln n
};

BicConvention parse_bic_convention(std::string_view name);
std::string_view bic_convention_name(BicConvention convention);

struct MetricsReport {
  double r_squared = 0.0;
  double bic = 0.0;
  double rho_squared = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
};

/// 1 - RSS/TSS about the observed mean. Throws std::domain_error on zero TSS.
double r_squared(std::span<const double> observed, std::span<const double> fitted);

/// Throws std::domain_error when rss <= 0 or n <= k.
double bic(double rss, std::size_t n, std::size_t k,
           BicConvention convention = BicConvention::variance_counted);

/// Squared Pearson correlation. Throws std::domain_error on zero variance.
double rho_squared(std::span<const double> observed_daily, std::span<const double> fitted_daily);

/// R^2 and rho^2 on the fit's window plus BIC from its RSS. With
/// `drop_first_daily` the first daily increment is left out of rho^2.
MetricsReport evaluate_fit(const FitResult& fit, const RegionSeries& data,
                           BicConvention convention = BicConvention::variance_counted,
                           bool drop_first_daily = false);

struct ForecastResult {
  std::size_t horizon_days = 0;
  std::vector<double> days;                  // 1-based model time t = n, ..., n + horizon - 1
  std::vector<double> assumed_swabs;         // DMPsw only: the daily swabs used beyond day n
  std::vector<double> predicted_cumulative;
  std::vector<double> predicted_daily;
  double saturation_fraction = 0.0;
};

/// Curve (or SIRD total) from the last observed day onward. DMPsw repeats
/// the final week of daily swabs for the forecast period.
ForecastResult forecast(const FitResult& fit, const RegionSeries& data, std::size_t horizon = 21);

/// last_cumulative / m_hat. Throws std::domain_error when m_hat <= 0.
double saturation_fraction(double last_cumulative, double m_hat);

/// Final-size estimate: m for curve models, N for SIRD.
double final_size(const FitResult& fit);

}  // namespace epifit
