#include "epifit/models.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "epifit/growth_models.hpp"

namespace epifit {

namespace {

const std::array<ModelSpec, 7>& registry() {
  static const std::array<ModelSpec, 7> specs = {{
      {ModelKind::logistic, "LOG", "log", {"m", "lambda", "eta"}},
      {ModelKind::gbm_rect, "GBM_RECT", "gbm", {"m", "p", "q", "c", "a", "b"}},
      {ModelKind::begbm_rect, "BeGBM_RECT", "begbm", {"m", "p", "q", "c", "a", "b", "A"}},
      {ModelKind::dmp, "DMP", "dmp", {"m", "p_c", "q_c", "p", "q"}},
      {ModelKind::dmp_seasonal,
       "DMPseas",
       "dmpseas",
       {"m", "p_c", "q_c", "p", "q", "s", "alpha_1", "alpha_2"}},
      {ModelKind::dmp_swab, "DMPsw", "dmpsw", {"m", "p_c", "q_c", "p", "q", "xi"}},
      {ModelKind::sird,
       "SIRD",
       "sird",
       {"logit(beta)", "logit(gamma)", "logit(delta)", "ln(N)", "ln(I0)"}},
  }};
  return specs;
}

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void check_arity(ModelKind kind, std::span<const double> theta) {
  if (theta.size() != model_spec(kind).parameter_count()) {
    throw std::invalid_argument("model " + std::string(model_spec(kind).abbreviation) +
                                " expects " +
                                std::to_string(model_spec(kind).parameter_count()) +
                                " parameters, got " + std::to_string(theta.size()));
  }
}

}  // namespace

const ModelSpec& model_spec(ModelKind kind) {
  return registry()[static_cast<std::size_t>(kind)];
}

ModelKind parse_model(std::string_view name) {
  const std::string wanted = lowered(name);
  for (const auto& spec : registry()) {
    if (wanted == spec.key || wanted == lowered(spec.abbreviation)) return spec.kind;
  }
  // A few spellings people reach for.
  if (wanted == "logistic") return ModelKind::logistic;
  if (wanted == "gbm_rect" || wanted == "gbmrect") return ModelKind::gbm_rect;
  if (wanted == "begbm_rect" || wanted == "begbmrect") return ModelKind::begbm_rect;
  if (wanted == "dmp_seas" || wanted == "dmp_seasonal") return ModelKind::dmp_seasonal;
  if (wanted == "dmp_sw" || wanted == "dmp_swab") return ModelKind::dmp_swab;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

double evaluate_curve(ModelKind kind, std::span<const double> theta, double t,
                      const SwabSchedule* swabs) {
  check_arity(kind, theta);
  switch (kind) {
    case ModelKind::logistic:
      return eval_logistic(t, {theta[0], theta[1], theta[2]});
    case ModelKind::gbm_rect: {
      const double W = rect_integral(t, {theta[4], theta[5], theta[3]});
      return eval_gbm(W, {theta[0], theta[1], theta[2]});
    }
    case ModelKind::begbm_rect: {
      const double W = rect_integral(t, {theta[4], theta[5], theta[3]});
      return eval_begbm(W, {{theta[0], theta[1], theta[2]}, theta[6]});
    }
    case ModelKind::dmp:
      return eval_dmp(t, {theta[0], theta[1], theta[2], theta[3], theta[4]});
    case ModelKind::dmp_seasonal: {
      const double W = seasonal_integral(t, {theta[6], theta[7], theta[5]});
      return eval_dmp_perturbed(t, {theta[0], theta[1], theta[2], theta[3], theta[4]}, W);
    }
    case ModelKind::dmp_swab: {
      if (swabs == nullptr) {
        throw std::invalid_argument("DMPsw needs a swab schedule");
      }
      const double W = swabs->cumulative_weight(t, theta[5]);
      return eval_dmp_perturbed(t, {theta[0], theta[1], theta[2], theta[3], theta[4]}, W);
    }
    case ModelKind::sird:
      break;
  }
  throw std::invalid_argument("SIRD has no closed-form curve; integrate it instead");
}

std::vector<double> evaluate_curve(ModelKind kind, std::span<const double> theta,
                                   std::span<const double> times, const SwabSchedule* swabs) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(evaluate_curve(kind, theta, t, swabs));
  return out;
}

std::vector<double> observation_times(std::size_t n, std::size_t first) {
  std::vector<double> times(n);
  for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(first + k);
  return times;
}

}  // namespace epifit
