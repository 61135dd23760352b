#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>

#include "epifit/optimize.hpp"

namespace epifit {

namespace {

struct ProfilePoint {
  double value;
  double nll;
};

std::vector<double> with_fixed(std::span<const double> others, std::size_t index, double value) {
  std::vector<double> full;
  full.reserve(others.size() + 1);
  full.insert(full.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(index));
  full.push_back(value);
  full.insert(full.end(), others.begin() + static_cast<std::ptrdiff_t>(index), others.end());
  return full;
}

}  // namespace

ProfileInterval profile_interval(const ScalarFunction& nll, std::span<const double> theta_hat,
                                 std::size_t index, const ProfileOptions& options) {
  if (index >= theta_hat.size()) {
    throw std::invalid_argument("profile_interval: index out of range");
  }
  const double center = theta_hat[index];
  const double nll_hat = nll(theta_hat);
  if (!std::isfinite(nll_hat)) {
    throw FitError("profile_interval: objective not finite at the estimate");
  }
  const double threshold =
      std::sqrt(boost::math::quantile(boost::math::chi_squared(1.0), options.level));
  const std::size_t min_points = std::max<std::size_t>(options.points_per_side, 2);

  double spacing = options.spacing;
  if (!(spacing > 0.0)) {
    spacing = options.scale > 0.0
                  ? 1.5 * threshold * options.scale / static_cast<double>(min_points)
                  : 0.01 * std::max(std::abs(center), 1.0);
  }

  std::vector<double> others_hat;
  for (std::size_t j = 0; j < theta_hat.size(); ++j) {
    if (j != index) others_hat.push_back(theta_hat[j]);
  }

  double nll_min = nll_hat;
  auto profile_side = [&](double direction, bool& open) {
    std::vector<ProfilePoint> points;
    std::vector<double> others = others_hat;
    open = true;
    for (std::size_t j = 1; j <= options.max_points_per_side; ++j) {
      const double value = center + direction * static_cast<double>(j) * spacing;
      double profiled;
      if (others.empty()) {
        profiled = nll(std::vector<double>{value});
      } else {
        const ScalarFunction reduced = [&](std::span<const double> rest) {
          return nll(with_fixed(rest, index, value));
        };
        const OptimizeResult inner = minimize_bfgs(reduced, others, options.inner);
        others = inner.x;
        profiled = inner.objective;
      }
      points.push_back({value, profiled});
      nll_min = std::min(nll_min, profiled);
      const double zeta = std::sqrt(std::max(0.0, 2.0 * (profiled - nll_min)));
      if (j >= min_points && zeta > threshold) {
        open = false;
        break;
      }
    }
    return points;
  };

  ProfileInterval out;
  const auto below = profile_side(-1.0, out.lower_open);
  const auto above = profile_side(+1.0, out.upper_open);

  // Uniform ascending grid: below (reversed), centre, above.
  for (auto it = below.rbegin(); it != below.rend(); ++it) {
    out.grid.push_back(it->value);
    out.zeta.push_back(-std::sqrt(std::max(0.0, 2.0 * (it->nll - nll_min))));
  }
  out.grid.push_back(center);
  out.zeta.push_back(0.0);
  for (const auto& p : above) {
    out.grid.push_back(p.value);
    out.zeta.push_back(std::sqrt(std::max(0.0, 2.0 * (p.nll - nll_min))));
  }

  const boost::math::interpolators::cardinal_cubic_b_spline<double> spline(
      out.zeta.begin(), out.zeta.end(), out.grid.front(), spacing);

  auto invert = [&](std::size_t lo, std::size_t hi, double target) {
    double a = out.grid[lo], b = out.grid[hi];
    double fa = spline(a) - target;
    const double fb = spline(b) - target;
    if (fa == 0.0 || (fa < 0.0) == (fb < 0.0)) return std::abs(fa) <= std::abs(fb) ? a : b;
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(std::abs(a), 1.0); ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = spline(mid) - target;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  const std::size_t mid = below.size();
  out.lower = out.grid.front();
  if (!out.lower_open) {
    for (std::size_t j = mid; j > 0; --j) {
      if (out.zeta[j - 1] <= -threshold) {
        out.lower = invert(j - 1, j, -threshold);
        break;
      }
    }
  }
  out.upper = out.grid.back();
  if (!out.upper_open) {
    for (std::size_t j = mid; j + 1 < out.grid.size(); ++j) {
      if (out.zeta[j + 1] >= threshold) {
        out.upper = invert(j, j + 1, threshold);
        break;
      }
    }
  }
  return out;
}

}  // namespace epifit
