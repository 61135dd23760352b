#pragma once

// Closed-form cumulative curves z(t) for the epidemic-growth models.
//
// Time is measured in days with z(0) = 0 on the day before the first
// observation, so observations sit at t = 1, 2, ..., n. Every curve that
// accepts an intervention takes the value of the cumulative weight
// W(t) = integral_0^t w(tau) dtau; with w == 1 pass W(t) = t.
//
// Exponent arguments are clamped to [-700, 700] before exponentiation. This
// only changes results for far-extrapolation queries (t of order 1e4 days).

#include <span>
#include <vector>

namespace epifit {

struct LogisticParams {
  double m;       // final size
  double lambda;  // location (median day)
  double eta;     // shape (days)
};

struct BassCoreParams {
  double m;
  double p;  // innovation
  double q;  // imitation, may be negative as long as p + q > 0
};

struct RectShockParams {
  double a;  // shock start (day)
  double b;  // shock end (day)
  double c;  // intensity
};

struct BemmaorParams {
  BassCoreParams core;
  double A;  // asymmetry exponent; A == 1 is the plain Bass form
};

struct DmpParams {
  double m;
  double p_c;  // potential innovation
  double q_c;  // potential imitation
  double p;
  double q;
};

struct SeasonalParams {
  double alpha1;
  double alpha2;
  double s;  // period (days)
};

struct SwabShockParams {
  double xi;
};

/// exp() with the argument clamped to [-700, 700].
double clamped_exp(double x);

/// Bass adoption fraction (1 - e^{-(p+q)W}) / (1 + (q/p) e^{-(p+q)W}).
/// Throws std::invalid_argument when p <= 0.
double bass_fraction(double cumulative_weight, double p, double q);

double eval_logistic(double t, const LogisticParams& params);

double eval_gbm(double cumulative_weight, const BassCoreParams& core);

double eval_begbm(double cumulative_weight, const BemmaorParams& params);

/// Square-root dynamic-potential factor of the DMP curve.
double dmp_potential_factor(double t, double p_c, double q_c);

double eval_dmp(double t, const DmpParams& params);

/// DMP whose adoption clock runs on W(t) while the potential factor keeps
/// the raw time t. eval_dmp_perturbed(t, p, t) == eval_dmp(t, p).
double eval_dmp_perturbed(double t, const DmpParams& params, double cumulative_weight);

/// First differences with the first element carried through:
/// out[0] = in[0], out[k] = in[k] - in[k-1]. Throws on empty input.
std::vector<double> daily_increments(std::span<const double> cumulative);

}  // namespace epifit
