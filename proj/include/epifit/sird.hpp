#pragma once

// SIRD compartmental model: dS = -beta I S / N, dI = beta I S / N - (gamma +
// delta) I, dR = gamma I, dD = delta I, with N = S + I + R + D fixed.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "epifit/region_series.hpp"

namespace epifit {

struct SirdParams {
  double beta;   // infection rate, (0, 1)
  double gamma;  // recovery rate, (0, 1)
  double delta;  // mortality rate, (0, 1)
  double N;      // population
  double I0;     // initial infected
};

/// Unconstrained coordinates used for estimation.
struct SirdTransformedParams {
  double logit_beta;
  double logit_gamma;
  double logit_delta;
  double ln_N;
  double ln_I0;
};

SirdTransformedParams to_transformed(const SirdParams& params);
SirdParams from_transformed(const SirdTransformedParams& tparams);

struct SirdState {
  double S;
  double I;
  double R;
  double D;
  double t;

  double population() const { return S + I + R + D; }
};

struct SirdDerivatives {
  double dS;
  double dI;
  double dR;
  double dD;
};

class SirdIntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SirdDerivatives sird_derivatives(const SirdState& state, const SirdParams& params);

/// Initial state with S0 = N - I0 - R0 - D0. Throws std::domain_error when
/// that leaves no susceptibles.
SirdState initial_state(const SirdParams& params, double R0, double D0, double t0 = 0.0);

inline constexpr double kSirdStep = 0.05;

/// Classical RK4 with a fixed step, sampled at integer days. Returns
/// horizon_days + 1 states (the initial one included). Throws
/// SirdIntegrationError if a compartment drops below -1e-9 * N.
std::vector<SirdState> integrate(const SirdParams& params, const SirdState& init,
                                 std::size_t horizon_days, double step = kSirdStep);

/// Per-day I + R + D.
std::vector<double> total_cases(std::span<const SirdState> trajectory);

enum class VarianceModel {
  pooled,      // one error variance shared by the I, R and D series
  per_series,  // separate variance per series
};

/// Gaussian negative log-likelihood of the observed I, R, D series with the
/// variance(s) concentrated out. The trajectory starts at the first observed
/// day with R0, D0 taken from the data.
class SirdLikelihood {
 public:
  SirdLikelihood(std::vector<double> infected, std::vector<double> recovered,
                 std::vector<double> deaths, VarianceModel variance = VarianceModel::pooled);
  explicit SirdLikelihood(const RegionSeries& observed,
                          VarianceModel variance = VarianceModel::pooled);

  /// Returns +inf for parameter values that cannot be integrated. A perfect
  /// fit (zero residual) is floored rather than returning -inf.
  double operator()(const SirdTransformedParams& tparams) const;

  /// Pooled or per-series residual sum of squares, summed over series.
  double sse(const SirdTransformedParams& tparams) const;

  std::size_t days() const { return infected_.size(); }
  double R0() const { return recovered_.front(); }
  double D0() const { return deaths_.front(); }
  VarianceModel variance_model() const { return variance_; }

  std::vector<SirdState> trajectory(const SirdTransformedParams& tparams,
                                    std::size_t extra_days = 0) const;

 private:
  std::vector<double> infected_;
  std::vector<double> recovered_;
  std::vector<double> deaths_;
  VarianceModel variance_;
};

/// Strict form of the likelihood: throws SirdIntegrationError on integration
/// failure and std::domain_error when the residual is exactly zero.
double neg_log_likelihood(const SirdTransformedParams& tparams, const RegionSeries& observed,
                          VarianceModel variance = VarianceModel::pooled);

}  // namespace epifit
