#include "epifit/estimation.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "epifit/growth_models.hpp"

namespace epifit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// GBM_RECT and BeGBM_RECT optimize the shock end as b = a + exp(width).
constexpr std::size_t kShockStart = 4;
constexpr std::size_t kShockEnd = 5;

bool has_shock(ModelKind model) {
  return model == ModelKind::gbm_rect || model == ModelKind::begbm_rect;
}

std::vector<double> to_working(ModelKind model, std::span<const double> natural) {
  std::vector<double> x(natural.begin(), natural.end());
  if (has_shock(model)) {
    x[kShockEnd] = std::log(std::max(natural[kShockEnd] - natural[kShockStart], 1e-6));
  }
  return x;
}

std::vector<double> to_natural(ModelKind model, std::span<const double> working) {
  std::vector<double> theta(working.begin(), working.end());
  if (has_shock(model)) {
    theta[kShockEnd] = working[kShockStart] + std::exp(working[kShockEnd]);
  }
  return theta;
}

// Pairs (innovation index, imitation index) that must satisfy p + q > 0.
std::vector<std::pair<std::size_t, std::size_t>> bass_pairs(ModelKind model) {
  switch (model) {
    case ModelKind::gbm_rect:
    case ModelKind::begbm_rect:
      return {{1, 2}};
    case ModelKind::dmp:
    case ModelKind::dmp_seasonal:
    case ModelKind::dmp_swab:
      return {{1, 2}, {3, 4}};
    default:
      return {};
  }
}

Projection make_projection(ModelKind model, double n) {
  return [model, n](std::span<double> x) {
    for (auto [p, q] : bass_pairs(model)) {
      x[q] = std::max(x[q], -x[p] * (1.0 - 1e-9));
    }
    if (has_shock(model)) {
      const double room = std::max(n - x[kShockStart], 0.5);
      x[kShockEnd] = std::min(x[kShockEnd], std::log(room));
    }
  };
}

struct WorkingBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

WorkingBox working_box(ModelKind model, const std::vector<ParameterBounds>& bounds, double n) {
  WorkingBox box;
  for (const auto& b : bounds) {
    box.lower.push_back(b.lower);
    box.upper.push_back(b.upper);
  }
  if (has_shock(model)) {
    box.lower[kShockEnd] = std::log(0.5);
    box.upper[kShockEnd] = std::log(std::max(n, 1.0));
  }
  return box;
}

// Portable uniform [0, 1) from a 64-bit engine.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// M Latin-hypercube points in [0,1)^k.
std::vector<std::vector<double>> latin_hypercube(std::size_t M, std::size_t k,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> points(M, std::vector<double>(k));
  std::vector<std::size_t> strata(M);
  for (std::size_t d = 0; d < k; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    for (std::size_t i = M; i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
      std::swap(strata[i - 1], strata[std::min(j, i - 1)]);
    }
    for (std::size_t i = 0; i < M; ++i) {
      points[i][d] = (static_cast<double>(strata[i]) + uniform01(rng)) / static_cast<double>(M);
    }
  }
  return points;
}

double max_value(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

void require_observations(const RegionSeries& data, std::size_t k) {
  if (data.size() < k + 2) {
    throw std::invalid_argument("need at least " + std::to_string(k + 2) +
                                " observations, got " + std::to_string(data.size()));
  }
}

// Lowest objective wins; ties go to the lexicographically smaller estimate.
bool better(double obj_a, const std::vector<double>& xa, double obj_b,
            const std::vector<double>& xb) {
  if (obj_a != obj_b) return obj_a < obj_b;
  return std::lexicographical_compare(xa.begin(), xa.end(), xb.begin(), xb.end());
}

std::vector<std::vector<double>> cartesian(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (double v : axis) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<double> clamp_to(std::vector<double> theta, const std::vector<ParameterBounds>& b) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    theta[j] = std::clamp(theta[j], b[j].lower, b[j].upper);
  }
  return theta;
}

// Covariance sigma^2 (J'J)^-1 via SVD, with the 2-norm condition number.
std::pair<Eigen::MatrixXd, double> ls_covariance(const Eigen::MatrixXd& J, double sigma2) {
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(JtJ, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                            : std::numeric_limits<double>::infinity();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  const double cutoff = s(0) * 1e-15 * static_cast<double>(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  Eigen::MatrixXd cov = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return {sigma2 * cov, cond};
}

std::vector<double> sird_heuristic_center(const RegionSeries& data) {
  const double last = data.cumulative_cases.back();
  const double i0 = std::max(data.infected.front(), 1.0);
  const SirdParams guess{0.2, 0.03, 0.006, 1.5 * last, i0};
  const auto t = to_transformed(guess);
  return {t.logit_beta, t.logit_gamma, t.logit_delta, t.ln_N, t.ln_I0};
}

SirdTransformedParams as_sird(std::span<const double> x) { return {x[0], x[1], x[2], x[3], x[4]}; }

}  // namespace

std::vector<ParameterBounds> default_bounds(ModelKind model, std::size_t n_obs,
                                            double max_cumulative) {
  const auto n = static_cast<double>(n_obs);
  const double ymax = std::max(max_cumulative, 1.0);
  const ParameterBounds m{0.5 * ymax, 100.0 * ymax};
  const ParameterBounds rate{1e-9, 1.0};
  const ParameterBounds imitation{-1.0, 5.0};
  switch (model) {
    case ModelKind::logistic:
      return {m, {-2.0 * n, 4.0 * n}, {1e-9, 10.0 * n}};
    case ModelKind::gbm_rect:
      return {m, rate, imitation, {-0.999, 20.0}, {0.0, n}, {0.0, n}};
    case ModelKind::begbm_rect:
      return {m, rate, imitation, {-0.999, 20.0}, {0.0, n}, {0.0, n}, {1e-6, 1e6}};
    case ModelKind::dmp:
      return {m, rate, imitation, rate, imitation};
    case ModelKind::dmp_seasonal:
      return {m, rate, imitation, rate, imitation, {2.0, std::max(n / 2.0, 2.5)}, {-5.0, 5.0},
              {-5.0, 5.0}};
    case ModelKind::dmp_swab:
      return {m, rate, imitation, rate, imitation, {-10.0, 10.0}};
    case ModelKind::sird:
      return {{-20.0, 20.0}, {-20.0, 20.0}, {-20.0, 20.0}, {0.0, 25.0}, {-10.0, 20.0}};
  }
  return {};
}

std::size_t peak_increment_day(std::span<const double> cumulative) {
  const auto daily = daily_increments(cumulative);
  // Skip day 1: its increment is the whole pre-window count.
  const auto start = daily.size() > 1 ? daily.begin() + 1 : daily.begin();
  return static_cast<std::size_t>(std::distance(daily.begin(), std::max_element(start, daily.end()))) + 1;
}

std::vector<std::vector<double>> default_starts(ModelKind model, const RegionSeries& data,
                                                const FitConfig& config) {
  if (data.empty()) throw std::invalid_argument("default_starts: empty series");
  const auto n = static_cast<double>(data.size());
  const double last = data.cumulative_cases.back();
  const auto peak = static_cast<double>(peak_increment_day(data.cumulative_cases));

  const std::vector<double> m0 = {1.1 * last, 1.5 * last, 3.0 * last};
  const std::vector<double> p0 = {1e-3, 1e-2};
  const std::vector<double> q0 = {0.05, 0.15};
  // Shock brackets around the day of the largest increment.
  const double a1 = std::max(1.0, 0.5 * peak), b1 = std::min(n - 1.0, peak + 2.0);
  const double a2 = std::max(1.0, peak - n / 6.0), b2 = std::min(n - 1.0, peak + n / 12.0);

  std::vector<std::vector<double>> starts;
  switch (model) {
    case ModelKind::logistic:
      starts = cartesian({m0, {peak}, {n / 8.0}});
      break;
    case ModelKind::gbm_rect:
    case ModelKind::begbm_rect: {
      for (auto [a, b] : {std::pair{a1, b1}, std::pair{a2, b2}}) {
        std::vector<std::vector<double>> axes = {m0, p0, q0, {0.5, 1.0}, {a}, {std::max(b, a + 1.0)}};
        if (model == ModelKind::begbm_rect) axes.push_back({1.0, 2.5});
        for (auto& s : cartesian(axes)) starts.push_back(std::move(s));
      }
      break;
    }
    case ModelKind::dmp:
      starts = cartesian({m0, p0, q0, p0, q0});
      break;
    case ModelKind::dmp_seasonal:
      starts = cartesian({m0, p0, q0, p0, q0, {7.0}, {0.05}, {0.05}});
      break;
    case ModelKind::dmp_swab:
      starts = cartesian({m0, p0, q0, p0, q0, {0.1, 0.5}});
      break;
    case ModelKind::sird: {
      const double i0 = std::max(data.infected.front(), 1.0);
      for (const auto& row : cartesian({{0.15, 0.3}, {0.02, 0.05}, {0.004, 0.01},
                                        {1.1 * last, 1.5 * last, 3.0 * last}, {i0, 3.0 * i0}})) {
        const auto t = to_transformed({row[0], row[1], row[2], row[3], row[4]});
        starts.push_back({t.logit_beta, t.logit_gamma, t.logit_delta, t.ln_N, t.ln_I0});
      }
      break;
    }
  }

  if (config.multistart_count == 0) return starts;

  // Jitter around the first heuristic start whose curve is closest to the data.
  std::vector<double> center = starts.front();
  if (model == ModelKind::sird) {
    center = sird_heuristic_center(data);
  } else {
    const auto times = observation_times(data.size());
    std::optional<SwabSchedule> swabs;
    if (model == ModelKind::dmp_swab) swabs = swab_schedule_for(data, config.swab_sd);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
      double rss = 0.0;
      try {
        const auto z = evaluate_curve(model, s, times, swabs ? &*swabs : nullptr);
        for (std::size_t i = 0; i < z.size(); ++i) {
          rss += (z[i] - data.cumulative_cases[i]) * (z[i] - data.cumulative_cases[i]);
        }
      } catch (const std::exception&) {
        continue;
      }
      if (rss < best) {
        best = rss;
        center = s;
      }
    }
  }

  const auto bounds = config.bounds.empty() ? default_bounds(model, data.size(), max_value(data.cumulative_cases))
                                            : config.bounds;
  const auto lhs = latin_hypercube(config.multistart_count, center.size(), config.seed);
  for (const auto& u : lhs) {
    std::vector<double> jittered(center.size());
    for (std::size_t j = 0; j < center.size(); ++j) {
      const double v = 2.0 * u[j] - 1.0;  // [-1, 1)
      if (model == ModelKind::sird) {
        jittered[j] = center[j] + 0.5 * v;
      } else if (bounds[j].lower >= 0.0 && center[j] > 0.0) {
        jittered[j] = center[j] * std::exp2(v);
      } else {
        jittered[j] = center[j] + 0.25 * v * std::max(std::abs(center[j]), 0.2);
      }
    }
    jittered = clamp_to(std::move(jittered), bounds);
    if (has_shock(model) && jittered[kShockEnd] <= jittered[kShockStart]) {
      jittered[kShockEnd] = std::min(jittered[kShockStart] + 1.0, n);
    }
    starts.push_back(std::move(jittered));
  }
  return starts;
}

Eigen::MatrixXd numeric_jacobian(ModelKind model, std::span<const double> theta,
                                 std::span<const double> times, double rel_step,
                                 const SwabSchedule* swabs) {
  const ModelFunction f = [&](std::span<const double> x) {
    return evaluate_curve(model, x, times, swabs);
  };
  return finite_difference_jacobian(f, theta, rel_step);
}

Interval wald_interval(double estimate, double se, double level, CriticalValue critical,
                       std::size_t dof) {
  const double tail = 0.5 * (1.0 + level);
  double q = 0.0;
  if (critical == CriticalValue::student_t && dof > 0) {
    q = boost::math::quantile(boost::math::students_t(static_cast<double>(dof)), tail);
  } else {
    q = boost::math::quantile(boost::math::normal(), tail);
  }
  return {estimate - q * se, estimate + q * se};
}

std::vector<Interval> asymptotic_ci(const FitResult& fit, double level, CriticalValue critical) {
  if (fit.standard_errors.size() != fit.estimates.size()) {
    throw FitError("asymptotic_ci: fit has no standard errors");
  }
  const std::size_t dof = fit.n > fit.k() ? fit.n - fit.k() : 0;
  std::vector<Interval> out;
  for (std::size_t j = 0; j < fit.k(); ++j) {
    if (!std::isfinite(fit.standard_errors[j])) {
      throw FitError("asymptotic_ci: rank-deficient J'J, no standard error for " +
                     fit.parameter_names[j]);
    }
    out.push_back(wald_interval(fit.estimates[j], fit.standard_errors[j], level, critical, dof));
  }
  return out;
}

SwabSchedule swab_schedule_for(const RegionSeries& data, SdConvention convention) {
  if (data.daily_swabs.size() != data.size()) {
    throw std::invalid_argument("DMPsw needs a daily swab series aligned with the cases");
  }
  return SwabSchedule::from_window(data.daily_swabs, convention);
}

FitResult nls_fit(ModelKind model, const RegionSeries& data, const FitConfig& config) {
  if (model == ModelKind::sird) return mle_fit(data, config);
  const auto starts = default_starts(model, data, config);
  return nls_fit_from(model, data, config, starts);
}

FitResult nls_fit_from(ModelKind model, const RegionSeries& data, const FitConfig& config,
                       std::span<const std::vector<double>> starts) {
  const ModelSpec& spec = model_spec(model);
  if (!spec.is_curve()) throw std::invalid_argument("nls_fit: SIRD is fitted by mle_fit");
  require_observations(data, spec.parameter_count());

  const std::size_t n = data.size();
  const auto times = observation_times(n);
  std::optional<SwabSchedule> swabs;
  if (model == ModelKind::dmp_swab) swabs = swab_schedule_for(data, config.swab_sd);
  const SwabSchedule* swab_ptr = swabs ? &*swabs : nullptr;

  const auto bounds = config.bounds.empty()
                          ? default_bounds(model, n, max_value(data.cumulative_cases))
                          : config.bounds;
  if (bounds.size() != spec.parameter_count()) {
    throw std::invalid_argument("bounds do not match the model's parameter count");
  }
  const WorkingBox box = working_box(model, bounds, static_cast<double>(n));
  const Projection project = make_projection(model, static_cast<double>(n));
  const ModelFunction working_model = [&](std::span<const double> x) {
    return evaluate_curve(model, to_natural(model, x), times, swab_ptr);
  };

  const StopCriteria stop = config.stop_criteria();
  bool have_best = false;
  OptimizeResult best;
  std::vector<double> best_natural;
  std::size_t tried = 0;
  for (const auto& start : starts) {
    OptimizeResult r;
    try {
      r = levenberg_marquardt(working_model, data.cumulative_cases, to_working(model, start),
                              stop, box.lower, box.upper, project);
    } catch (const FitError&) {
      continue;
    }
    ++tried;
    auto natural = to_natural(model, r.x);
    if (!have_best || better(r.objective, natural, best.objective, best_natural)) {
      best = std::move(r);
      best_natural = std::move(natural);
      have_best = true;
    }
  }
  if (!have_best) {
    throw FitError("nls_fit: no starting point produced a finite " +
                   std::string(spec.abbreviation) + " curve");
  }

  FitResult fit;
  fit.model = model;
  fit.parameter_names.assign(spec.parameter_names.begin(), spec.parameter_names.end());
  fit.estimates = best_natural;
  fit.natural_estimates = best_natural;
  fit.rss = best.objective;
  fit.objective = best.objective;
  fit.n = n;
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  fit.starts_tried = tried;
  fit.interval_method = "asymptotic";
  if (swabs) fit.swab_stats = swabs->stats();
  fit.fitted_cumulative = evaluate_curve(model, fit.estimates, times, swab_ptr);
  fit.fitted_daily = daily_increments(fit.fitted_cumulative);

  const std::size_t k = spec.parameter_count();
  const double sigma2 = fit.rss / static_cast<double>(n - k);
  try {
    const Eigen::MatrixXd J =
        numeric_jacobian(model, fit.estimates, times, config.finite_difference_step, swab_ptr);
    const auto [cov, cond] = ls_covariance(J, sigma2);
    fit.condition_number = cond;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
      fit.standard_errors.push_back(v >= 0.0 ? std::sqrt(v) : kNaN);
    }
    if (cond > 1e14) {
      std::ostringstream os;
      os << "ill-conditioned J'J (condition number " << cond << ")";
      fit.note = os.str();
    }
  } catch (const FitError& e) {
    fit.standard_errors.assign(k, kNaN);
    fit.note = e.what();
  }
  const std::size_t dof = n - k;
  for (std::size_t j = 0; j < k; ++j) {
    const double se = std::isfinite(fit.standard_errors[j]) ? fit.standard_errors[j] : 0.0;
    auto ci = wald_interval(fit.estimates[j], se, config.confidence_level, config.critical_value,
                            dof);
    if (!std::isfinite(fit.standard_errors[j])) ci.lower_open = ci.upper_open = true;
    fit.confidence_intervals.push_back(ci);
  }
  return fit;
}

FitResult mle_fit(const RegionSeries& data, const FitConfig& config) {
  const auto starts = default_starts(ModelKind::sird, data, config);
  return mle_fit_from(data, config, starts);
}

FitResult mle_fit_from(const RegionSeries& data, const FitConfig& config,
                       std::span<const std::vector<double>> starts) {
  const ModelSpec& spec = model_spec(ModelKind::sird);
  require_observations(data, spec.parameter_count());
  const SirdLikelihood likelihood(data, config.sird_variance);
  const ScalarFunction nll = [&](std::span<const double> x) { return likelihood(as_sird(x)); };

  // Screen the starts and refine the most promising ones.
  std::vector<std::pair<double, std::size_t>> screened;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const double v = nll(starts[i]);
    if (std::isfinite(v)) screened.emplace_back(v, i);
  }
  if (screened.empty()) throw FitError("mle_fit: every starting point fails to integrate");
  std::stable_sort(screened.begin(), screened.end());
  constexpr std::size_t kRefined = 12;
  if (screened.size() > kRefined) screened.resize(kRefined);

  StopCriteria stop = config.stop_criteria();
  bool have_best = false;
  OptimizeResult best;
  std::size_t tried = 0;
  for (const auto& [value, i] : screened) {
    (void)value;
    OptimizeResult r;
    try {
      r = minimize_bfgs(nll, starts[i], stop);
    } catch (const FitError&) {
      continue;
    }
    ++tried;
    if (!have_best || better(r.objective, r.x, best.objective, best.x)) {
      best = std::move(r);
      have_best = true;
    }
  }
  if (!have_best) throw FitError("mle_fit: optimization failed from every start");

  FitResult fit;
  fit.model = ModelKind::sird;
  fit.parameter_names.assign(spec.parameter_names.begin(), spec.parameter_names.end());
  fit.estimates = best.x;
  const SirdParams natural = from_transformed(as_sird(best.x));
  fit.natural_estimates = {natural.beta, natural.gamma, natural.delta, natural.N, natural.I0};
  fit.objective = best.objective;
  fit.n = data.size();
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  fit.starts_tried = tried;

  const auto path = likelihood.trajectory(as_sird(best.x));
  fit.fitted_cumulative = total_cases(path);
  fit.fitted_daily = daily_increments(fit.fitted_cumulative);
  fit.rss = 0.0;
  for (std::size_t i = 0; i < fit.n; ++i) {
    const double r = data.cumulative_cases[i] - fit.fitted_cumulative[i];
    fit.rss += r * r;
  }

  const std::size_t k = spec.parameter_count();
  const Eigen::MatrixXd H = finite_difference_hessian(nll, best.x, 1e-4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const auto& ev = eig.eigenvalues();
  fit.condition_number = ev(0) > 0.0 ? ev(ev.size() - 1) / ev(0)
                                     : std::numeric_limits<double>::infinity();
  if (ev(0) > 0.0) {
    const Eigen::MatrixXd cov = H.inverse();
    for (std::size_t j = 0; j < k; ++j) {
      fit.standard_errors.push_back(
          std::sqrt(cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
    }
  } else {
    fit.standard_errors.assign(k, kNaN);
    fit.note = "Hessian not positive definite at the optimum";
  }

  if (config.sird_profile_intervals) {
    fit.interval_method = "profile likelihood";
    for (std::size_t j = 0; j < k; ++j) {
      fit.confidence_intervals.push_back(profile_ci(fit, data, j, config.confidence_level, config));
    }
  } else {
    fit.interval_method = "asymptotic";
    for (std::size_t j = 0; j < k; ++j) {
      const double se = std::isfinite(fit.standard_errors[j]) ? fit.standard_errors[j] : 0.0;
      fit.confidence_intervals.push_back(
          wald_interval(fit.estimates[j], se, config.confidence_level, CriticalValue::normal, 0));
    }
  }
  return fit;
}

FitResult fit_model(ModelKind model, const RegionSeries& data, const FitConfig& config) {
  return model == ModelKind::sird ? mle_fit(data, config) : nls_fit(model, data, config);
}

Interval profile_ci(const FitResult& fit, const RegionSeries& data, std::size_t index,
                    double level, const FitConfig& config) {
  if (fit.model != ModelKind::sird) {
    throw std::invalid_argument("profile_ci: only the SIRD likelihood is profiled");
  }
  const SirdLikelihood likelihood(data, config.sird_variance);
  const ScalarFunction nll = [&](std::span<const double> x) { return likelihood(as_sird(x)); };
  ProfileOptions options;
  options.level = level;
  options.scale = index < fit.standard_errors.size() && std::isfinite(fit.standard_errors[index])
                      ? fit.standard_errors[index]
                      : 0.0;
  options.inner = config.stop_criteria();
  options.inner.max_iterations = std::min(config.max_iterations, 200);
  const ProfileInterval p = profile_interval(nll, fit.estimates, index, options);
  return {p.lower, p.upper, p.lower_open, p.upper_open};
}

std::vector<double> fitted_curve(const FitResult& fit, const RegionSeries& data,
                                 std::size_t first_day, std::size_t count,
                                 const SwabSchedule* swabs) {
  if (fit.model == ModelKind::sird) {
    const SirdLikelihood likelihood(data, VarianceModel::pooled);
    const std::size_t last_day = first_day + count - 1;
    const std::size_t extra = last_day > data.size() ? last_day - data.size() : 0;
    const auto path = likelihood.trajectory(as_sird(fit.estimates), extra);
    const auto totals = total_cases(path);
    return {totals.begin() + static_cast<std::ptrdiff_t>(first_day - 1),
            totals.begin() + static_cast<std::ptrdiff_t>(first_day - 1 + count)};
  }
  std::optional<SwabSchedule> own;
  if (fit.model == ModelKind::dmp_swab && swabs == nullptr) {
    own = SwabSchedule(data.daily_swabs, fit.swab_stats.value());
    swabs = &*own;
  }
  return evaluate_curve(fit.model, fit.estimates, observation_times(count, first_day), swabs);
}

}  // namespace epifit
