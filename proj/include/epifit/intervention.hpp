#pragma once

// Intervention weights w(t) and their cumulative integrals W(t).
//
// The swab weight is defined on daily data. Day u (1-based) covers the
// interval (u-1, u], so the cumulative weight is a running sum of daily
// weights: W(t) = sum_{u=1..t} w_B(u), W(0) = 0. Because the standardization
// uses the mean over the fitting window, W(n) = n on that window.

#include <cstddef>
#include <span>
#include <vector>

#include "epifit/growth_models.hpp"

namespace epifit {

struct SwabStats {
  double mu_B;     // mean daily swabs over the fitting window
  double sigma_B;  // standard deviation over the fitting window
};

enum class SdConvention {
  population,  // divide by n
  sample,      // divide by n - 1
};

double rect_weight(double t, const RectShockParams& shock);
double rect_integral(double t, const RectShockParams& shock);

double seasonal_weight(double t, const SeasonalParams& params);
double seasonal_integral(double t, const SeasonalParams& params);

/// Mean and standard deviation of the daily swab series. Throws on fewer
/// than two values or a constant series.
SwabStats swab_stats(std::span<const double> daily_swabs,
                     SdConvention convention = SdConvention::population);

double swab_weight(double swabs, const SwabStats& stats, double xi);

/// Running sum of swab weights over days 1..t. daily_swabs[0] is day 1.
/// Throws std::out_of_range when t exceeds the schedule.
double swab_integral(std::size_t t, std::span<const double> daily_swabs,
                     const SwabStats& stats, double xi);

/// Precomputed swab schedule for repeated curve evaluation.
///
/// Stores the running sums of standardized swabs S(t) = sum_{u<=t} z_u so
/// that W(t) = t + xi * S(t) costs O(1). Non-integer t interpolates
/// linearly inside the day, matching the step-function integrand.
class SwabSchedule {
 public:
  SwabSchedule() = default;
  SwabSchedule(std::span<const double> daily_swabs, const SwabStats& stats);

  /// Schedule standardized with statistics computed from `daily_swabs`.
  static SwabSchedule from_window(std::span<const double> daily_swabs,
                                  SdConvention convention = SdConvention::population);

  /// Copy of this schedule with further days appended. The standardization
  /// statistics are not recomputed.
  SwabSchedule extended(std::span<const double> extra_daily_swabs) const;

  double cumulative_weight(double t, double xi) const;

  std::size_t days() const { return swabs_.size(); }
  const SwabStats& stats() const { return stats_; }
  std::span<const double> daily_swabs() const { return swabs_; }

 private:
  std::vector<double> swabs_;
  std::vector<double> standardized_sum_;  // size days()+1, [0] = 0
  SwabStats stats_{0.0, 1.0};
};

}  // namespace epifit
