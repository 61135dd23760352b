#pragma once

// The seven competing models and their parameter layouts.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epifit/intervention.hpp"

namespace epifit {

enum class ModelKind {
  logistic,
  gbm_rect,
  begbm_rect,
  dmp,
  dmp_seasonal,
  dmp_swab,
  sird,
};

inline constexpr std::array<ModelKind, 7> kAllModels = {
    ModelKind::logistic,     ModelKind::gbm_rect, ModelKind::begbm_rect, ModelKind::dmp,
    ModelKind::dmp_seasonal, ModelKind::dmp_swab, ModelKind::sird,
};

struct ModelSpec {
  ModelKind kind;
  std::string_view abbreviation;  // LOG, GBM_RECT, ...
  std::string_view key;           // lower-case CLI / file-name token
  std::vector<std::string_view> parameter_names;

  std::size_t parameter_count() const { return parameter_names.size(); }
  bool is_curve() const { return kind != ModelKind::sird; }
};

const ModelSpec& model_spec(ModelKind kind);

/// Accepts the key ("dmpsw") or abbreviation ("DMPsw"), case-insensitive.
/// Throws std::invalid_argument for unknown names.
ModelKind parse_model(std::string_view name);

/// Cumulative curve value for the closed-form models. `swabs` is required
/// for ModelKind::dmp_swab and ignored otherwise. Throws for ModelKind::sird.
///
/// Parameter layouts (same order as the printed parameter tables):
///   logistic      m, lambda, eta
///   gbm_rect      m, p, q, c, a, b
///   begbm_rect    m, p, q, c, a, b, A
///   dmp           m, p_c, q_c, p, q
///   dmp_seasonal  m, p_c, q_c, p, q, s, alpha_1, alpha_2
///   dmp_swab      m, p_c, q_c, p, q, xi
double evaluate_curve(ModelKind kind, std::span<const double> theta, double t,
                      const SwabSchedule* swabs = nullptr);

std::vector<double> evaluate_curve(ModelKind kind, std::span<const double> theta,
                                   std::span<const double> times,
                                   const SwabSchedule* swabs = nullptr);

/// Observation times 1, 2, ..., n.
std::vector<double> observation_times(std::size_t n, std::size_t first = 1);

}  // namespace epifit
