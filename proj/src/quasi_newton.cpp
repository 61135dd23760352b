#include <algorithm>
#include <cmath>
#include <limits>

#include "epifit/optimize.hpp"

namespace epifit {

namespace {

double step_for(double x, double rel_step) { return rel_step * std::max(std::abs(x), 1.0); }

}  // namespace

std::vector<double> finite_difference_gradient(const ScalarFunction& f,
                                               std::span<const double> x, double rel_step) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = step_for(x[j], rel_step);
    probe[j] = x[j] + h;
    const double up = f(probe);
    probe[j] = x[j] - h;
    const double down = f(probe);
    probe[j] = x[j];
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

Eigen::MatrixXd finite_difference_hessian(const ScalarFunction& f, std::span<const double> x,
                                          double rel_step) {
  const std::size_t k = x.size();
  Eigen::MatrixXd H(k, k);
  std::vector<double> probe(x.begin(), x.end());
  const double f0 = f(x);
  for (std::size_t i = 0; i < k; ++i) {
    const double hi = step_for(x[i], rel_step);
    probe[i] = x[i] + hi;
    const double fp = f(probe);
    probe[i] = x[i] - hi;
    const double fm = f(probe);
    probe[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (std::size_t j = 0; j < i; ++j) {
      const double hj = step_for(x[j], rel_step);
      auto at = [&](double si, double sj) {
        probe[i] = x[i] + si * hi;
        probe[j] = x[j] + sj * hj;
        const double v = f(probe);
        probe[i] = x[i];
        probe[j] = x[j];
        return v;
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

OptimizeResult minimize_bfgs(const ScalarFunction& f, std::vector<double> x0,
                             const StopCriteria& stop) {
  const auto k = static_cast<Eigen::Index>(x0.size());
  OptimizeResult result;
  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(x0.data(), k);
  auto eval = [&](const Eigen::VectorXd& v) {
    ++result.evaluations;
    return f(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
  };
  auto grad = [&](const Eigen::VectorXd& v) {
    result.evaluations += static_cast<int>(2 * k);
    auto g = finite_difference_gradient(
        f, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
        stop.finite_difference_step);
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(g.data(), k));
  };

  double fx = eval(x);
  if (!std::isfinite(fx)) {
    throw FitError("minimize_bfgs: objective not finite at the starting point");
  }
  Eigen::VectorXd g = grad(x);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(k, k);
  int small_decreases = 0;

  for (int iter = 0; iter < stop.max_iterations; ++iter) {
    result.iterations = iter + 1;
    if (g.lpNorm<Eigen::Infinity>() < stop.gradient_tolerance) {
      result.converged = true;
      result.stop_reason = "gradient";
      break;
    }
    Eigen::VectorXd direction = -Hinv * g;
    if (direction.dot(g) >= 0.0) {
      Hinv.setIdentity();
      direction = -g;
    }

    // Backtracking line search with the Armijo condition.
    double alpha = 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x_new;
    const double slope = direction.dot(g);
    bool found = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + alpha * direction;
      f_new = eval(x_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * alpha * slope) {
        found = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!found) {
      if (Hinv.isIdentity()) {
        result.converged = true;
        result.stop_reason = "line search stalled";
        break;
      }
      Hinv.setIdentity();
      continue;
    }

    const Eigen::VectorXd g_new = grad(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (iter == 0) Hinv *= sy / yv.dot(yv);
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
      Hinv = (I - rho * s * yv.transpose()) * Hinv * (I - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }

    const double decrease = fx - f_new;
    x = x_new;
    g = g_new;
    fx = f_new;
    result.objective_trace.push_back(fx);

    if (decrease <= stop.objective_tolerance * std::max(std::abs(fx), 1.0)) {
      if (++small_decreases >= 3) {
        result.converged = true;
        result.stop_reason = "objective";
        break;
      }
    } else {
      small_decreases = 0;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
  result.x.assign(x.data(), x.data() + k);
  result.objective = fx;
  return result;
}

}  // namespace epifit
