#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "epifit/optimize.hpp"

using namespace epifit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// y = a exp(-b x) on x in [0, 4].
std::vector<double> decay(std::span<const double> theta, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 4.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(theta[0] * std::exp(-theta[1] * x));
  }
  return out;
}

// Correlated bivariate Gaussian negative log-likelihood.
struct QuadraticToy {
  double mu0 = 1.5, mu1 = -0.7;
  double s00 = 0.04, s01 = 0.018, s11 = 0.09;  // covariance
  double offset = 0.0;

  double operator()(std::span<const double> x) const {
    const double det = s00 * s11 - s01 * s01;
    const double d0 = x[0] - mu0, d1 = x[1] - mu1;
    return offset + 0.5 * (s11 * d0 * d0 - 2.0 * s01 * d0 * d1 + s00 * d1 * d1) / det;
  }
};

}  // namespace

TEST_CASE("damped least squares never increases the objective", "[optimize][property]") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> eps(0.0, 0.05);
  std::vector<double> y = decay(std::vector<double>{5.0, 0.8}, 40);
  for (double& v : y) v += eps(rng);
  const ModelFunction model = [](std::span<const double> x) { return decay(x, 40); };
  const std::vector<double> lower = {0.0, 0.0}, upper = {100.0, 10.0};
  for (const auto& start : {std::vector<double>{1.0, 0.1}, std::vector<double>{20.0, 3.0}}) {
    const auto r = levenberg_marquardt(model, y, start, {}, lower, upper);
    CHECK(r.converged);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      CHECK(r.objective_trace[i] <= r.objective_trace[i - 1]);
    }
    CHECK_THAT(r.x[0], WithinRel(5.0, 0.05));
    CHECK_THAT(r.x[1], WithinRel(0.8, 0.05));
  }
}

TEST_CASE("finite-difference Jacobian", "[optimize]") {
  const ModelFunction model = [](std::span<const double> x) { return decay(x, 10); };
  const std::vector<double> theta = {5.0, 0.8};
  const auto J = finite_difference_jacobian(model, theta, 1e-6);
  const auto base = decay(theta, 10);
  for (int i = 0; i < 10; ++i) {
    CHECK_THAT(J(i, 0), WithinRel(base[i] / 5.0, 1e-9));
  }

  // A parameter the model ignores gets a zero column.
  const ModelFunction ignores = [](std::span<const double> x) {
    return decay(std::vector<double>{x[0], x[1]}, 10);
  };
  const auto J3 = finite_difference_jacobian(ignores, std::vector<double>{5.0, 0.8, 3.0}, 1e-6);
  CHECK(J3.col(2).cwiseAbs().maxCoeff() == 0.0);

  // At the lower bound the backward point is skipped.
  const std::vector<double> lower = {5.0, 0.0}, upper = {10.0, 10.0};
  const auto Jb = finite_difference_jacobian(model, theta, 1e-6, lower, upper);
  CHECK_THAT(Jb(3, 0), WithinRel(base[3] / 5.0, 1e-6));

  const ModelFunction nan_model = [](std::span<const double>) {
    return std::vector<double>{std::nan("")};
  };
  CHECK_THROWS_AS(finite_difference_jacobian(nan_model, theta, 1e-6), FitError);
}

TEST_CASE("BFGS minimizes the Rosenbrock function", "[optimize]") {
  const ScalarFunction rosen = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  StopCriteria stop;
  stop.max_iterations = 2000;
  const auto r = minimize_bfgs(rosen, {-1.2, 1.0}, stop);
  CHECK(r.converged);
  CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-5));
  CHECK_THAT(r.x[1], WithinAbs(1.0, 1e-5));
  const ScalarFunction inf = [](std::span<const double>) { return INFINITY; };
  CHECK_THROWS_AS(minimize_bfgs(inf, {0.0}, stop), FitError);
}

TEST_CASE("numeric Hessian of a quadratic", "[optimize]") {
  const QuadraticToy toy;
  const auto H = finite_difference_hessian(toy, std::vector<double>{1.0, 0.0}, 1e-4);
  const double det = toy.s00 * toy.s11 - toy.s01 * toy.s01;
  CHECK_THAT(H(0, 0), WithinRel(toy.s11 / det, 1e-6));
  CHECK_THAT(H(0, 1), WithinRel(-toy.s01 / det, 1e-6));
  CHECK_THAT(H(1, 1), WithinRel(toy.s00 / det, 1e-6));
}

TEST_CASE("profile interval of an exact quadratic is the Wald interval", "[optimize][profile]") {
  const QuadraticToy toy;
  const std::vector<double> hat = {toy.mu0, toy.mu1};
  const double z = 1.959963984540054;
  for (std::size_t index : {0u, 1u}) {
    ProfileOptions opt;
    opt.scale = std::sqrt(index == 0 ? toy.s00 : toy.s11);
    const auto pi = profile_interval(toy, hat, index, opt);
    CHECK_FALSE(pi.lower_open);
    CHECK_FALSE(pi.upper_open);
    CHECK(pi.grid.size() >= 31);
    CHECK_THAT(pi.lower, WithinAbs(hat[index] - z * opt.scale, 1e-6));
    CHECK_THAT(pi.upper, WithinAbs(hat[index] + z * opt.scale, 1e-6));
  }
}

TEST_CASE("adding a constant to the objective leaves the profile interval unchanged",
          "[optimize][profile]") {
  QuadraticToy toy;
  const std::vector<double> hat = {toy.mu0, toy.mu1};
  ProfileOptions opt;
  opt.scale = 0.2;
  const auto base = profile_interval(toy, hat, 0, opt);
  toy.offset = 1234.5;
  const auto shifted = profile_interval(toy, hat, 0, opt);
  CHECK_THAT(shifted.lower, WithinAbs(base.lower, 1e-9));
  CHECK_THAT(shifted.upper, WithinAbs(base.upper, 1e-9));
}

TEST_CASE("a profile that never crosses the threshold is reported open", "[optimize][profile]") {
  // Flat above the estimate.
  const ScalarFunction half = [](std::span<const double> x) {
    const double d = x[0] - 1.0;
    return d < 0.0 ? 0.5 * d * d / 0.01 : 0.0;
  };
  ProfileOptions opt;
  opt.scale = 0.1;
  opt.max_points_per_side = 30;
  const auto pi = profile_interval(half, std::vector<double>{1.0}, 0, opt);
  CHECK_FALSE(pi.lower_open);
  CHECK(pi.upper_open);
  CHECK_THAT(pi.lower, WithinAbs(1.0 - 1.959963984540054 * 0.1, 1e-6));
}
