#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "epifit/growth_models.hpp"
#include "epifit/intervention.hpp"
#include "epifit/models.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace epifit;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Independent plain-Bass evaluation without the library's helpers.
double plain_bass(double t, double m, double p, double q) {
  const double e = std::exp(-(p + q) * t);
  return m * (1.0 - e) / (1.0 + (q / p) * e);
}

}  // namespace

TEST_CASE("curves match high-precision reference values", "[growth]") {
  using testing::veneto_parameters;
  CHECK_THAT(evaluate_curve(ModelKind::logistic, veneto_parameters(ModelKind::logistic), 73.0),
             WithinRel(oracle::kLogisticVenetoT73, 1e-12));
  CHECK_THAT(evaluate_curve(ModelKind::gbm_rect, veneto_parameters(ModelKind::gbm_rect), 30.0),
             WithinRel(oracle::kGbmRectVenetoT30, 1e-12));
  CHECK_THAT(evaluate_curve(ModelKind::begbm_rect, veneto_parameters(ModelKind::begbm_rect), 33.0),
             WithinRel(oracle::kBeGbmRectVenetoT33, 1e-12));
  CHECK_THAT(evaluate_curve(ModelKind::dmp, veneto_parameters(ModelKind::dmp), 40.0),
             WithinRel(oracle::kDmpVenetoT40, 1e-12));
  CHECK_THAT(evaluate_curve(ModelKind::dmp_seasonal, veneto_parameters(ModelKind::dmp_seasonal), 50.0),
             WithinRel(oracle::kDmpSeasVenetoT50, 1e-12));
  const auto sched = SwabSchedule::from_window(testing::surrogate_swabs(73));
  CHECK_THAT(evaluate_curve(ModelKind::dmp_swab, veneto_parameters(ModelKind::dmp_swab), 40.0, &sched),
             WithinRel(oracle::kDmpSwabSurrogateT40, 1e-12));
  CHECK_THAT(evaluate_curve(ModelKind::dmp_swab, veneto_parameters(ModelKind::dmp_swab), 73.0, &sched),
             WithinRel(oracle::kDmpSwabSurrogateT73, 1e-12));
}

TEST_CASE("logistic at its location is half the final size", "[growth]") {
  CHECK_THAT(eval_logistic(30.0, {10000.0, 30.0, 5.0}), WithinRel(5000.0, 1e-15));
  CHECK_THAT(eval_logistic(1e6, {10000.0, 30.0, 5.0}), WithinRel(10000.0, 1e-15));
}

TEST_CASE("bass fraction rejects non-positive innovation", "[growth]") {
  CHECK_THROWS_AS(bass_fraction(1.0, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(bass_fraction(1.0, -1e-3, 0.1), std::invalid_argument);
  CHECK(bass_fraction(0.0, 0.01, 0.2) == 0.0);
}

TEST_CASE("clamped exponent stays finite", "[growth]") {
  CHECK(std::isfinite(clamped_exp(1e6)));
  CHECK(clamped_exp(-1e6) >= 0.0);
  CHECK(clamped_exp(1.5) == std::exp(1.5));
}

TEST_CASE("analytic identities over random draws", "[growth][property]") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto sched = SwabSchedule::from_window(testing::surrogate_swabs(80));
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const double m = 1e3 + 1e5 * U(rng);
    const double p = 1e-4 + 0.05 * U(rng);
    const double q = 0.01 + 0.3 * U(rng);
    const double pc = 1e-4 + 0.01 * U(rng);
    const double qc = 0.05 + 0.3 * U(rng);
    const double a = 5.0 + 20.0 * U(rng);
    const double b = a + 1.0 + 20.0 * U(rng);
    const double c = -0.9 + 2.0 * U(rng);
    const double t = 1.0 + 79.0 * U(rng);
    const double day = std::ceil(t);

    const std::vector<double> gbm = {m, p, q, c, a, b};
    const std::vector<double> begbm = {m, p, q, c, a, b, 1.0};
    worst = std::max(worst, rel_dev(evaluate_curve(ModelKind::begbm_rect, begbm, t),
                                    evaluate_curve(ModelKind::gbm_rect, gbm, t)));

    const DmpParams dmp{m, pc, qc, p, q};
    worst = std::max(worst, rel_dev(eval_dmp_perturbed(t, dmp, t), eval_dmp(t, dmp)));

    const std::vector<double> dmpsw = {m, pc, qc, p, q, 0.0};
    const std::vector<double> dmpv = {m, pc, qc, p, q};
    worst = std::max(worst, rel_dev(evaluate_curve(ModelKind::dmp_swab, dmpsw, day, &sched),
                                    evaluate_curve(ModelKind::dmp, dmpv, day)));

    const std::vector<double> no_shock = {m, p, q, 0.0, a, b};
    worst = std::max(worst, rel_dev(evaluate_curve(ModelKind::gbm_rect, no_shock, t),
                                    plain_bass(t, m, p, q)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("curves start at zero, rise monotonically and stay below the ceiling", "[growth][property]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto sched = SwabSchedule::from_window(testing::surrogate_swabs(120));
  for (int draw = 0; draw < 50; ++draw) {
    const double m = 1e3 + 1e5 * U(rng);
    const double p = 1e-4 + 0.05 * U(rng);
    const double q = 0.01 + 0.3 * U(rng);
    const double a = 5.0 + 20.0 * U(rng);
    const std::vector<std::vector<double>> thetas = {
        {m, 10.0 + 50.0 * U(rng), 2.0 + 10.0 * U(rng)},
        {m, p, q, -0.9 + 2.0 * U(rng), a, a + 10.0},
        {m, p, q, -0.9 + 2.0 * U(rng), a, a + 10.0, 0.2 + 4.0 * U(rng)},
        {m, 1e-3, 0.2, p, q},
        {m, 1e-3, 0.2, p, q, 7.0, 0.1 * U(rng), 0.1 * U(rng)},
        {m, 1e-3, 0.2, p, q, 0.5 * U(rng)},
    };
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      const auto model = kAllModels[k];
      double prev = 0.0;
      if (model != ModelKind::logistic) {
        CHECK(evaluate_curve(model, thetas[k], 0.0, &sched) == Catch::Approx(0.0).margin(1e-9));
      }
      for (int day = 1; day <= 120; ++day) {
        const double z = evaluate_curve(model, thetas[k], day, &sched);
        CHECK(z >= prev - 1e-9 * m);
        CHECK(z <= m * (1.0 + 1e-12));
        prev = z;
      }
    }
  }
}

TEST_CASE("daily increments carry the first value and sum back", "[growth]") {
  const std::vector<double> cum = {3.0, 10.0, 10.0, 25.0};
  const auto daily = daily_increments(cum);
  CHECK(daily == std::vector<double>{3.0, 7.0, 0.0, 15.0});
  double total = 0.0;
  for (double d : daily) total += d;
  CHECK(total == cum.back());
  CHECK_THROWS(daily_increments(std::vector<double>{}));
}

TEST_CASE("model registry", "[models]") {
  CHECK(parse_model("DMPsw") == ModelKind::dmp_swab);
  CHECK(parse_model("dmpsw") == ModelKind::dmp_swab);
  CHECK(parse_model("BeGBM_RECT") == ModelKind::begbm_rect);
  CHECK(parse_model("sird") == ModelKind::sird);
  CHECK_THROWS_AS(parse_model("gompertz"), std::invalid_argument);
  for (auto kind : kAllModels) CHECK(model_spec(kind).kind == kind);
  CHECK(model_spec(ModelKind::dmp_seasonal).parameter_count() == 8);
  CHECK_THROWS(evaluate_curve(ModelKind::dmp_swab, testing::kVenetoDmpSwab, 5.0));
  CHECK_THROWS(evaluate_curve(ModelKind::sird, testing::kVenetoSird, 5.0));
  CHECK_THROWS(evaluate_curve(ModelKind::logistic, std::vector<double>{1.0, 2.0}, 5.0));
  CHECK(observation_times(3) == std::vector<double>{1.0, 2.0, 3.0});
}
