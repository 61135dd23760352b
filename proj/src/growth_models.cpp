#include "epifit/growth_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epifit {

namespace {

constexpr double kExpLimit = 700.0;

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

}  // namespace

double clamped_exp(double x) { return std::exp(std::clamp(x, -kExpLimit, kExpLimit)); }

double bass_fraction(double cumulative_weight, double p, double q) {
  require_positive(p, "innovation coefficient p");
  const double decay = clamped_exp(-(p + q) * cumulative_weight);
  return (1.0 - decay) / (1.0 + (q / p) * decay);
}

double eval_logistic(double t, const LogisticParams& params) {
  require_positive(params.eta, "logistic shape eta");
  // m / (1 + e^{-(t-lambda)/eta}) is the same curve without overflowing for
  // large positive arguments.
  return params.m / (1.0 + clamped_exp(-(t - params.lambda) / params.eta));
}

double eval_gbm(double cumulative_weight, const BassCoreParams& core) {
  return core.m * bass_fraction(cumulative_weight, core.p, core.q);
}

double eval_begbm(double cumulative_weight, const BemmaorParams& params) {
  const auto& [m, p, q] = params.core;
  require_positive(p, "innovation coefficient p");
  require_positive(params.A, "asymmetry exponent A");
  const double decay = clamped_exp(-(p + q) * cumulative_weight);
  const double denominator = 1.0 + (q / p) * decay;
  if (params.A == 1.0) {
    return m * (1.0 - decay) / denominator;
  }
  return m * (1.0 - decay) / std::pow(denominator, params.A);
}

double dmp_potential_factor(double t, double p_c, double q_c) {
  require_positive(p_c, "potential innovation coefficient p_c");
  // The fraction is in [0, 1) for t >= 0 but can dip below zero by rounding.
  return std::sqrt(std::max(0.0, bass_fraction(t, p_c, q_c)));
}

double eval_dmp(double t, const DmpParams& params) {
  return eval_dmp_perturbed(t, params, t);
}

double eval_dmp_perturbed(double t, const DmpParams& params, double cumulative_weight) {
  return params.m * dmp_potential_factor(t, params.p_c, params.q_c) *
         bass_fraction(cumulative_weight, params.p, params.q);
}

std::vector<double> daily_increments(std::span<const double> cumulative) {
  if (cumulative.empty()) {
    throw std::invalid_argument("daily_increments: empty series");
  }
  std::vector<double> daily(cumulative.size());
  daily[0] = cumulative[0];
  for (std::size_t k = 1; k < cumulative.size(); ++k) {
    daily[k] = cumulative[k] - cumulative[k - 1];
  }
  return daily;
}

}  // namespace epifit
