#include "epifit/sird.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace epifit {

namespace {

double logit(double x) { return std::log(x / (1.0 - x)); }
double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

SirdState advance(const SirdState& y, const SirdDerivatives& k, double h) {
  return {y.S + h * k.dS, y.I + h * k.dI, y.R + h * k.dR, y.D + h * k.dD, y.t + h};
}

SirdState rk4_step(const SirdState& y, const SirdParams& params, double h) {
  const auto k1 = sird_derivatives(y, params);
  const auto k2 = sird_derivatives(advance(y, k1, h / 2), params);
  const auto k3 = sird_derivatives(advance(y, k2, h / 2), params);
  const auto k4 = sird_derivatives(advance(y, k3, h), params);
  return {y.S + h / 6 * (k1.dS + 2 * k2.dS + 2 * k3.dS + k4.dS),
          y.I + h / 6 * (k1.dI + 2 * k2.dI + 2 * k3.dI + k4.dI),
          y.R + h / 6 * (k1.dR + 2 * k2.dR + 2 * k3.dR + k4.dR),
          y.D + h / 6 * (k1.dD + 2 * k2.dD + 2 * k3.dD + k4.dD), y.t + h};
}

double gaussian_nll(double sse, double count) {
  return 0.5 * count * (std::log(2.0 * std::numbers::pi * sse / count) + 1.0);
}

}  // namespace

SirdTransformedParams to_transformed(const SirdParams& params) {
  return {logit(params.beta), logit(params.gamma), logit(params.delta), std::log(params.N),
          std::log(params.I0)};
}

SirdParams from_transformed(const SirdTransformedParams& tparams) {
  return {expit(tparams.logit_beta), expit(tparams.logit_gamma), expit(tparams.logit_delta),
          std::exp(tparams.ln_N), std::exp(tparams.ln_I0)};
}

SirdDerivatives sird_derivatives(const SirdState& state, const SirdParams& params) {
  const double infections = params.beta * state.I * state.S / params.N;
  const double recoveries = params.gamma * state.I;
  const double deaths = params.delta * state.I;
  return {-infections, infections - recoveries - deaths, recoveries, deaths};
}

SirdState initial_state(const SirdParams& params, double R0, double D0, double t0) {
  const double S0 = params.N - params.I0 - R0 - D0;
  if (!(S0 > 0.0)) {
    throw std::domain_error("SIRD: N must exceed I0 + R0 + D0");
  }
  return {S0, params.I0, R0, D0, t0};
}

std::vector<SirdState> integrate(const SirdParams& params, const SirdState& init,
                                 std::size_t horizon_days, double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw std::invalid_argument("SIRD step must lie in (0, 1]");
  }
  const auto substeps = static_cast<std::size_t>(std::llround(1.0 / step));
  const double h = 1.0 / static_cast<double>(substeps);
  const double floor = -1e-9 * params.N;

  std::vector<SirdState> trajectory;
  trajectory.reserve(horizon_days + 1);
  trajectory.push_back(init);
  SirdState y = init;
  for (std::size_t day = 1; day <= horizon_days; ++day) {
    for (std::size_t k = 0; k < substeps; ++k) y = rk4_step(y, params, h);
    y.t = init.t + static_cast<double>(day);
    if (y.S < floor || y.I < floor || y.R < floor || y.D < floor || !std::isfinite(y.S) ||
        !std::isfinite(y.I)) {
      throw SirdIntegrationError("SIRD integration unstable at day " + std::to_string(day));
    }
    trajectory.push_back(y);
  }
  return trajectory;
}

std::vector<double> total_cases(std::span<const SirdState> trajectory) {
  std::vector<double> totals;
  totals.reserve(trajectory.size());
  for (const auto& s : trajectory) totals.push_back(s.I + s.R + s.D);
  return totals;
}

SirdLikelihood::SirdLikelihood(std::vector<double> infected, std::vector<double> recovered,
                               std::vector<double> deaths, VarianceModel variance)
    : infected_(std::move(infected)),
      recovered_(std::move(recovered)),
      deaths_(std::move(deaths)),
      variance_(variance) {
  if (infected_.size() < 2 || infected_.size() != recovered_.size() ||
      infected_.size() != deaths_.size()) {
    throw std::invalid_argument("SIRD likelihood: I, R, D series must be aligned, length >= 2");
  }
}

SirdLikelihood::SirdLikelihood(const RegionSeries& observed, VarianceModel variance)
    : SirdLikelihood(observed.infected, observed.recovered, observed.deaths, variance) {}

std::vector<SirdState> SirdLikelihood::trajectory(const SirdTransformedParams& tparams,
                                                  std::size_t extra_days) const {
  const SirdParams params = from_transformed(tparams);
  return integrate(params, initial_state(params, R0(), D0()), days() - 1 + extra_days);
}

double SirdLikelihood::sse(const SirdTransformedParams& tparams) const {
  const auto path = trajectory(tparams);
  double total = 0.0;
  for (std::size_t k = 0; k < days(); ++k) {
    const double eI = infected_[k] - path[k].I;
    const double eR = recovered_[k] - path[k].R;
    const double eD = deaths_[k] - path[k].D;
    total += eI * eI + eR * eR + eD * eD;
  }
  return total;
}

double SirdLikelihood::operator()(const SirdTransformedParams& tparams) const {
  constexpr double kTiny = 1e-300;
  std::vector<SirdState> path;
  try {
    path = trajectory(tparams);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
  double sI = 0.0, sR = 0.0, sD = 0.0;
  for (std::size_t k = 0; k < days(); ++k) {
    const double eI = infected_[k] - path[k].I;
    const double eR = recovered_[k] - path[k].R;
    const double eD = deaths_[k] - path[k].D;
    sI += eI * eI;
    sR += eR * eR;
    sD += eD * eD;
  }
  const auto n = static_cast<double>(days());
  if (variance_ == VarianceModel::pooled) {
    return gaussian_nll(std::max(sI + sR + sD, kTiny), 3.0 * n);
  }
  return gaussian_nll(std::max(sI, kTiny), n) + gaussian_nll(std::max(sR, kTiny), n) +
         gaussian_nll(std::max(sD, kTiny), n);
}

double neg_log_likelihood(const SirdTransformedParams& tparams, const RegionSeries& observed,
                          VarianceModel variance) {
  const SirdLikelihood likelihood(observed, variance);
  // trajectory() throws on integration failure, which is what we want here.
  const double sse = likelihood.sse(tparams);
  if (sse == 0.0) {
    throw std::domain_error("SIRD likelihood undefined for a zero residual");
  }
  return likelihood(tparams);
}

}  // namespace epifit
