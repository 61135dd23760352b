#pragma once

// Parameter estimation for the seven models.
//
// Curve models are fitted to cumulative cases by damped least squares with a
// numeric Jacobian and deterministic multistart. SIRD is fitted to the I, R
// and D series by maximum likelihood in logit/log coordinates.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epifit/intervention.hpp"
#include "epifit/models.hpp"
#include "epifit/optimize.hpp"
#include "epifit/region_series.hpp"
#include "epifit/sird.hpp"

namespace epifit {

struct ParameterBounds {
  double lower;
  double upper;
};

enum class CriticalValue {
  student_t,  // t quantile with n - k degrees of freedom
  normal,
};

struct FitConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-12;
  double objective_tolerance = 1e-12;
  double finite_difference_step = 1e-6;
  std::size_t multistart_count = 8;  // Latin-hypercube jitters on top of the heuristic starts
  std::uint64_t seed = 20200503;
  std::vector<ParameterBounds> bounds;  // empty: model defaults from default_bounds()
  double confidence_level = 0.95;
  CriticalValue critical_value = CriticalValue::student_t;
  SdConvention swab_sd = SdConvention::population;
  VarianceModel sird_variance = VarianceModel::pooled;
  bool sird_profile_intervals = true;

  StopCriteria stop_criteria() const {
    return {max_iterations, gradient_tolerance, step_tolerance, objective_tolerance,
            finite_difference_step};
  }
};

struct Interval {
  double lower;
  double upper;
  bool lower_open = false;
  bool upper_open = false;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

struct FitResult {
  ModelKind model = ModelKind::logistic;
  std::vector<std::string> parameter_names;
  std::vector<double> estimates;  // SIRD: logit/log scale
  std::vector<double> standard_errors;
  std::vector<Interval> confidence_intervals;
  std::string interval_method;           // "asymptotic" or "profile likelihood"
  std::vector<double> natural_estimates;  // SIRD: beta, gamma, delta, N, I0
  double rss = 0.0;        // on cumulative cases
  double objective = 0.0;  // RSS for curve models, negative log-likelihood for SIRD
  std::size_t n = 0;
  std::vector<double> fitted_cumulative;
  std::vector<double> fitted_daily;
  bool converged = false;
  int iterations = 0;
  std::size_t starts_tried = 0;
  double condition_number = 0.0;  // of J'J (curve) or the Hessian (SIRD)
  std::optional<SwabStats> swab_stats;
  std::string note;

  std::size_t k() const { return estimates.size(); }
};

/// Default box for each parameter of a curve model given the data scale.
std::vector<ParameterBounds> default_bounds(ModelKind model, std::size_t n, double max_cumulative);

/// Heuristic starting points (natural parameter layout of evaluate_curve,
/// or SIRD transformed coordinates) plus `config.multistart_count`
/// Latin-hypercube jitters seeded by `config.seed`.
std::vector<std::vector<double>> default_starts(ModelKind model, const RegionSeries& data,
                                                const FitConfig& config = {});

/// Index of the largest daily increment, as a 1-based day.
std::size_t peak_increment_day(std::span<const double> cumulative);

/// Central-difference Jacobian dz(t_i)/dtheta_j with step rel_step * max(|theta_j|, 1).
Eigen::MatrixXd numeric_jacobian(ModelKind model, std::span<const double> theta,
                                 std::span<const double> times, double rel_step,
                                 const SwabSchedule* swabs = nullptr);

/// theta_hat +- critical * se.
Interval wald_interval(double estimate, double se, double level, CriticalValue critical,
                       std::size_t dof);

/// Asymptotic intervals from the fit's standard errors with n - k degrees of
/// freedom. Throws FitError when the fit has no finite standard errors.
std::vector<Interval> asymptotic_ci(const FitResult& fit, double level = 0.95,
                                    CriticalValue critical = CriticalValue::student_t);

/// Swab schedule for DMPsw built from the series' daily swabs.
SwabSchedule swab_schedule_for(const RegionSeries& data, SdConvention convention);

/// Least-squares fit of a closed-form curve model to the cumulative cases.
FitResult nls_fit(ModelKind model, const RegionSeries& data, const FitConfig& config = {});

/// Same, from explicit starting points (natural layout).
FitResult nls_fit_from(ModelKind model, const RegionSeries& data, const FitConfig& config,
                       std::span<const std::vector<double>> starts);

/// Maximum-likelihood SIRD fit to the I, R, D series.
FitResult mle_fit(const RegionSeries& data, const FitConfig& config = {});

FitResult mle_fit_from(const RegionSeries& data, const FitConfig& config,
                       std::span<const std::vector<double>> starts);

/// Dispatches to nls_fit or mle_fit.
FitResult fit_model(ModelKind model, const RegionSeries& data, const FitConfig& config = {});

/// Profile-likelihood interval for SIRD parameter `index` (transformed
/// scale) of a converged mle_fit.
Interval profile_ci(const FitResult& fit, const RegionSeries& data, std::size_t index,
                    double level = 0.95, const FitConfig& config = {});

/// Curve or SIRD cumulative values at 1-based days [first, first + count).
/// `swabs` must cover those days for DMPsw.
std::vector<double> fitted_curve(const FitResult& fit, const RegionSeries& data,
                                 std::size_t first_day, std::size_t count,
                                 const SwabSchedule* swabs = nullptr);

}  // namespace epifit
