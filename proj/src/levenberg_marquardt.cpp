#include <algorithm>
#include <cmath>
#include <limits>

#include "epifit/optimize.hpp"

namespace epifit {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Model values, or an empty vector when the model throws or is non-finite.
std::vector<double> try_model(const ModelFunction& model, std::span<const double> x) {
  try {
    auto values = model(x);
    if (all_finite(values)) return values;
  } catch (const std::exception&) {
  }
  return {};
}

double residual_ss(std::span<const double> y, const std::vector<double>& f) {
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - f[i];
    rss += r * r;
  }
  return rss;
}

}  // namespace

Eigen::MatrixXd finite_difference_jacobian(const ModelFunction& model, std::span<const double> x,
                                           double rel_step, std::span<const double> lower,
                                           std::span<const double> upper) {
  const std::size_t k = x.size();
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> center;
  Eigen::MatrixXd jac;

  for (std::size_t j = 0; j < k; ++j) {
    const double h = rel_step * std::max(std::abs(x[j]), 1.0);
    const bool can_go_down = lower.empty() || x[j] - h >= lower[j];
    const bool can_go_up = upper.empty() || x[j] + h <= upper[j];

    std::vector<double> plus, minus;
    if (can_go_up) {
      probe[j] = x[j] + h;
      plus = try_model(model, probe);
    }
    if (can_go_down) {
      probe[j] = x[j] - h;
      minus = try_model(model, probe);
    }
    probe[j] = x[j];

    if ((plus.empty() || minus.empty()) && center.empty()) {
      center = try_model(model, x);
      if (center.empty()) {
        throw FitError("finite_difference_jacobian: model not finite at the expansion point");
      }
    }
    const std::size_t n = !plus.empty() ? plus.size() : !minus.empty() ? minus.size() : center.size();
    if (jac.size() == 0) jac.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));

    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.0;
      if (!plus.empty() && !minus.empty()) {
        d = (plus[i] - minus[i]) / (2.0 * h);
      } else if (!plus.empty()) {
        d = (plus[i] - center[i]) / h;
      } else if (!minus.empty()) {
        d = (center[i] - minus[i]) / h;
      } else {
        throw FitError("finite_difference_jacobian: non-finite model value when perturbing "
                       "parameter " + std::to_string(j));
      }
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
    }
  }
  return jac;
}

OptimizeResult levenberg_marquardt(const ModelFunction& model, std::span<const double> y,
                                   std::vector<double> x0, const StopCriteria& stop,
                                   std::span<const double> lower, std::span<const double> upper,
                                   const Projection& project) {
  const std::size_t k = x0.size();
  auto feasible = [&](std::vector<double>& x) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!lower.empty()) x[j] = std::max(x[j], lower[j]);
      if (!upper.empty()) x[j] = std::min(x[j], upper[j]);
    }
    if (project) project(x);
  };

  OptimizeResult result;
  std::vector<double> x = std::move(x0);
  feasible(x);
  std::vector<double> f = try_model(model, x);
  ++result.evaluations;
  if (f.empty()) {
    throw FitError("levenberg_marquardt: model not finite at the starting point");
  }
  double rss = residual_ss(y, f);
  double mu = 1e-3;
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));

  for (int iter = 0; iter < stop.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const Eigen::MatrixXd J = finite_difference_jacobian(model, x, stop.finite_difference_step,
                                                         lower, upper);
    result.evaluations += static_cast<int>(2 * k);
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
    const Eigen::VectorXd r = yv - fv;
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;

    double scaled_gradient = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      scaled_gradient = std::max(scaled_gradient, std::abs(g(static_cast<Eigen::Index>(j))) *
                                                      std::max(std::abs(x[j]), 1.0));
    }
    if (scaled_gradient <= stop.gradient_tolerance * std::max(rss, 1e-300)) {
      result.converged = true;
      result.stop_reason = "gradient";
      break;
    }

    Eigen::VectorXd diag = A.diagonal();
    const double diag_floor = std::max(diag.maxCoeff(), 1e-300) * 1e-14;
    for (Eigen::Index j = 0; j < diag.size(); ++j) diag(j) = std::max(diag(j), diag_floor);

    bool accepted = false;
    double new_rss = rss;
    std::vector<double> x_new;
    std::vector<double> f_new;
    while (!accepted) {
      Eigen::MatrixXd damped = A;
      damped.diagonal() += mu * diag;
      const Eigen::VectorXd delta = damped.ldlt().solve(g);
      if (delta.allFinite()) {
        x_new = x;
        for (std::size_t j = 0; j < k; ++j) x_new[j] += delta(static_cast<Eigen::Index>(j));
        feasible(x_new);
        f_new = try_model(model, x_new);
        ++result.evaluations;
        if (!f_new.empty()) {
          new_rss = residual_ss(y, f_new);
          if (new_rss < rss) {
            accepted = true;
            break;
          }
        }
      }
      mu *= 4.0;
      if (mu > 1e16) break;
    }

    if (!accepted) {
      // No damping level decreases the objective: stationary to working precision.
      result.converged = true;
      result.stop_reason = "no further decrease";
      break;
    }

    double step_norm = 0.0, x_norm = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      step_norm += (x_new[j] - x[j]) * (x_new[j] - x[j]) / std::max(x[j] * x[j], 1.0);
      x_norm += 1.0;
    }
    const double relative_decrease = (rss - new_rss) / std::max(rss, 1e-300);
    x = std::move(x_new);
    f = std::move(f_new);
    rss = new_rss;
    result.objective_trace.push_back(rss);
    mu = std::max(mu / 3.0, 1e-12);

    if (relative_decrease < stop.objective_tolerance) {
      result.converged = true;
      result.stop_reason = "objective";
      break;
    }
    if (std::sqrt(step_norm / x_norm) < stop.step_tolerance) {
      result.converged = true;
      result.stop_reason = "step";
      break;
    }
    if (rss == 0.0) {
      result.converged = true;
      result.stop_reason = "exact fit";
      break;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
  result.x = std::move(x);
  result.objective = rss;
  return result;
}

}  // namespace epifit
