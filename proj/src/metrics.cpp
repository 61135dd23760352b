#include "epifit/metrics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "epifit/growth_models.hpp"

namespace epifit {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b, std::size_t min,
                         const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": series lengths differ");
  }
  if (a.size() < min) {
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min) +
                                " points");
  }
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

BicConvention parse_bic_convention(std::string_view name) {
  if (name == "variance" || name == "k+1" || name == "default") return BicConvention::variance_counted;
  if (name == "k" || name == "k-only") return BicConvention::k_only;
  if (name == "gaussian" || name == "full") return BicConvention::full_gaussian;
  throw std::invalid_argument("unknown BIC convention '" + std::string(name) +
                              "' (expected variance, k-only or gaussian)");
}

std::string_view bic_convention_name(BicConvention convention) {
  switch (convention) {
    case BicConvention::variance_counted: return "n*ln(RSS/n) + (k+1)*ln(n)";
    case BicConvention::k_only: return "n*ln(RSS/n) + k*ln(n)";
    case BicConvention::full_gaussian: return "n*(ln(2*pi*RSS/n) + 1) + (k+1)*ln(n)";
  }
  return "";
}

double r_squared(std::span<const double> observed, std::span<const double> fitted) {
  require_same_length(observed, fitted, 2, "r_squared");
  const double ybar = mean(observed);
  double rss = 0.0, tss = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    rss += (observed[i] - fitted[i]) * (observed[i] - fitted[i]);
    tss += (observed[i] - ybar) * (observed[i] - ybar);
  }
  if (tss == 0.0) throw std::domain_error("r_squared: observed series is constant");
  return 1.0 - rss / tss;
}

double bic(double rss, std::size_t n, std::size_t k, BicConvention convention) {
  if (!(rss > 0.0)) throw std::domain_error("bic: residual sum of squares must be positive");
  if (n <= k) throw std::domain_error("bic: need more observations than parameters");
  const double nd = static_cast<double>(n);
  const double ln_n = std::log(nd);
  const double kd = static_cast<double>(k);
  switch (convention) {
    case BicConvention::variance_counted:
      return nd * std::log(rss / nd) + (kd + 1.0) * ln_n;
    case BicConvention::k_only:
      return nd * std::log(rss / nd) + kd * ln_n;
    case BicConvention::full_gaussian:
      return nd * (std::log(2.0 * std::numbers::pi * rss / nd) + 1.0) + (kd + 1.0) * ln_n;
  }
  return 0.0;
}

double rho_squared(std::span<const double> observed_daily, std::span<const double> fitted_daily) {
  require_same_length(observed_daily, fitted_daily, 3, "rho_squared");
  const double xbar = mean(observed_daily);
  const double ybar = mean(fitted_daily);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < observed_daily.size(); ++i) {
    const double dx = observed_daily[i] - xbar;
    const double dy = fitted_daily[i] - ybar;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("rho_squared: zero variance");
  return std::min(1.0, sxy * sxy / (sxx * syy));
}

MetricsReport evaluate_fit(const FitResult& fit, const RegionSeries& data,
                           BicConvention convention, bool drop_first_daily) {
  MetricsReport report;
  report.n = fit.n;
  report.k = fit.k();
  report.r_squared = r_squared(data.cumulative_cases, fit.fitted_cumulative);
  report.bic = bic(fit.rss, fit.n, fit.k(), convention);
  const auto observed_daily = daily_increments(data.cumulative_cases);
  const std::size_t skip = drop_first_daily ? 1 : 0;
  report.rho_squared = rho_squared(std::span(observed_daily).subspan(skip),
                                   std::span(fit.fitted_daily).subspan(skip));
  return report;
}

double saturation_fraction(double last_cumulative, double m_hat) {
  if (!(m_hat > 0.0)) throw std::domain_error("saturation_fraction: final size must be positive");
  return last_cumulative / m_hat;
}

double final_size(const FitResult& fit) {
  if (fit.model == ModelKind::sird) return fit.natural_estimates.at(3);
  return fit.estimates.at(0);
}

ForecastResult forecast(const FitResult& fit, const RegionSeries& data, std::size_t horizon) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("forecast: empty series");
  ForecastResult out;
  out.horizon_days = horizon;
  out.saturation_fraction = saturation_fraction(data.cumulative_cases.back(), final_size(fit));
  if (horizon == 0) return out;

  std::optional<SwabSchedule> swabs;
  if (fit.model == ModelKind::dmp_swab) {
    constexpr std::size_t kWeek = 7;
    if (data.daily_swabs.size() != n || n < kWeek || !fit.swab_stats) {
      throw std::invalid_argument("forecast: DMPsw needs the last week of daily swabs");
    }
    const auto last_week = std::span(data.daily_swabs).last(kWeek);
    for (std::size_t i = 0; i < horizon; ++i) out.assumed_swabs.push_back(last_week[i % kWeek]);
    swabs = SwabSchedule(data.daily_swabs, *fit.swab_stats).extended(out.assumed_swabs);
  }

  // One extra day in front so the first daily value is a difference too.
  const std::size_t first = n > 1 ? n - 1 : n;
  const std::size_t lead = n - first;
  const auto values = fitted_curve(fit, data, first, horizon + lead, swabs ? &*swabs : nullptr);
  for (std::size_t h = 0; h < horizon; ++h) {
    out.days.push_back(static_cast<double>(n + h));
    out.predicted_cumulative.push_back(values[h + lead]);
    const double previous = h + lead > 0 ? values[h + lead - 1] : 0.0;
    out.predicted_daily.push_back(values[h + lead] - previous);
  }
  return out;
}

}  // namespace epifit
