#pragma once

// General-purpose optimizers used by the estimators: damped least squares
// (Levenberg-Marquardt) for curve fits and BFGS for likelihoods. Both use
// central finite differences with per-coordinate step
// rel_step * max(|x_i|, 1).

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epifit {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps a parameter vector to model predictions (one per observation).
using ModelFunction = std::function<std::vector<double>(std::span<const double>)>;

/// Pulls a trial point back into the feasible region, in place.
using Projection = std::function<void(std::span<double>)>;

using ScalarFunction = std::function<double(std::span<const double>)>;

struct StopCriteria {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-12;
  double objective_tolerance = 1e-12;
  double finite_difference_step = 1e-6;
};

struct OptimizeResult {
  std::vector<double> x;
  double objective = 0.0;  // RSS for least squares, function value for BFGS
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  std::string stop_reason;
  std::vector<double> objective_trace;  // objective after each accepted step
};

/// Central-difference Jacobian of `model` at `x` (rows: observations,
/// columns: parameters). Falls back to a one-sided difference when one of
/// the perturbed points is outside [lower, upper] or non-finite. Throws
/// FitError when neither side gives finite values.
Eigen::MatrixXd finite_difference_jacobian(const ModelFunction& model, std::span<const double> x,
                                           double rel_step,
                                           std::span<const double> lower = {},
                                           std::span<const double> upper = {});

/// Minimizes sum (y - model(x))^2. Accepted steps never increase the RSS.
OptimizeResult levenberg_marquardt(const ModelFunction& model, std::span<const double> y,
                                   std::vector<double> x0, const StopCriteria& stop,
                                   std::span<const double> lower, std::span<const double> upper,
                                   const Projection& project = {});

/// Central-difference gradient.
std::vector<double> finite_difference_gradient(const ScalarFunction& f,
                                               std::span<const double> x, double rel_step);

/// Central-difference Hessian (symmetrized).
Eigen::MatrixXd finite_difference_hessian(const ScalarFunction& f, std::span<const double> x,
                                          double rel_step);

/// Unconstrained BFGS with backtracking (Armijo) line search. `f` may return
/// +inf for infeasible points; the line search backs off from them.
OptimizeResult minimize_bfgs(const ScalarFunction& f, std::vector<double> x0,
                             const StopCriteria& stop);

/// Profile-likelihood interval for one coordinate of a minimized negative
/// log-likelihood.
struct ProfileInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_open = false;  // profile never crossed the threshold below
  bool upper_open = false;
  std::vector<double> grid;   // parameter values, ascending
  std::vector<double> zeta;   // signed root deviance at each grid value
};

struct ProfileOptions {
  double level = 0.95;
  std::size_t points_per_side = 15;  // at least this many on each side
  std::size_t max_points_per_side = 60;
  double spacing = 0.0;  // grid step; 0 picks one from `scale`
  double scale = 0.0;    // rough standard error of the profiled coordinate
  StopCriteria inner;    // re-optimization of the remaining coordinates
};

/// Profiles coordinate `index` of `nll` around the minimizer `theta_hat`.
/// Each grid point re-minimizes the other coordinates (warm-started from
/// the neighbouring point), the signed root deviance
/// zeta = sign(theta - theta_hat) * sqrt(2 (nll - nll_min)) is fitted with a
/// cubic spline, and the spline is inverted at +-sqrt(chi2_1(level)).
ProfileInterval profile_interval(const ScalarFunction& nll, std::span<const double> theta_hat,
                                 std::size_t index, const ProfileOptions& options);

}  // namespace epifit
