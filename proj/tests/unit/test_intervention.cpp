#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "epifit/intervention.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace epifit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

template <class F>
double quad(F f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

// Integral of the rectangular weight, split at the jumps.
double rect_quadrature(double t, const RectShockParams& s) {
  const auto w = [&](double x) { return rect_weight(x, s); };
  std::vector<double> cuts = {0.0};
  for (double x : {s.a, s.b}) {
    if (x > 0.0 && x < t) cuts.push_back(x);
  }
  cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad(w, cuts[i], cuts[i + 1]);
  return total;
}

}  // namespace

TEST_CASE("rectangular integral against quadrature", "[intervention]") {
  CHECK_THAT(rect_integral(40.0, {14.37807, 32.88902, 0.678511}),
             WithinAbs(oracle::kRectIntegralVenetoT40, 1e-9));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = 60.0 * U(rng);
    const RectShockParams s{a, a + 30.0 * U(rng), -0.99 + 5.0 * U(rng)};
    const double t = 100.0 * U(rng);
    CHECK_THAT(rect_integral(t, s), WithinAbs(rect_quadrature(t, s), 1e-8));
  }
}

TEST_CASE("rectangular weight", "[intervention]") {
  const RectShockParams s{10.0, 20.0, 0.5};
  CHECK(rect_weight(5.0, s) == 1.0);
  CHECK(rect_weight(15.0, s) == 1.5);
  CHECK(rect_weight(25.0, s) == 1.0);
  CHECK(rect_integral(5.0, s) == 5.0);
  CHECK(rect_integral(25.0, s) == 30.0);
}

TEST_CASE("seasonal integral against quadrature", "[intervention]") {
  CHECK_THAT(seasonal_integral(10.0, {0.010361, 0.067384, 7.003457}),
             WithinAbs(oracle::kSeasonalIntegralVenetoT10, 1e-12));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const SeasonalParams s{-0.5 + U(rng), -0.5 + U(rng), 2.0 + 30.0 * U(rng)};
    const double t = 100.0 * U(rng);
    const double ref = quad([&](double x) { return seasonal_weight(x, s); }, 0.0, t);
    CHECK_THAT(seasonal_integral(t, s), WithinAbs(ref, 1e-8));
  }
  // Whole periods integrate the cosine and sine terms away.
  CHECK_THAT(seasonal_integral(21.0, {0.3, 0.2, 7.0}), WithinAbs(21.0, 1e-12));
}

TEST_CASE("swab statistics and cumulative weight", "[intervention]") {
  const auto swabs = testing::surrogate_swabs(73);
  const auto stats = swab_stats(swabs);
  CHECK_THAT(stats.mu_B, WithinRel(oracle::kSurrogateSwabMean, 1e-14));
  CHECK_THAT(stats.sigma_B, WithinRel(oracle::kSurrogateSwabSdPopulation, 1e-13));
  CHECK_THAT(swab_integral(40, swabs, stats, 0.468809),
             WithinRel(oracle::kSurrogateSwabIntegralT40, 1e-12));

  const auto sample = swab_stats(swabs, SdConvention::sample);
  CHECK_THAT(sample.sigma_B, WithinRel(stats.sigma_B * std::sqrt(73.0 / 72.0), 1e-14));

  CHECK(swab_weight(stats.mu_B, stats, 0.7) == 1.0);
  CHECK(swab_integral(0, swabs, stats, 0.5) == 0.0);
  CHECK_THROWS_AS(swab_integral(74, swabs, stats, 0.5), std::out_of_range);
  CHECK_THROWS(swab_stats(std::vector<double>{5.0}));
  CHECK_THROWS(swab_stats(std::vector<double>{5.0, 5.0, 5.0}));
}

TEST_CASE("mean-centred swabs integrate to the window length", "[intervention][property]") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 10 + static_cast<std::size_t>(90 * U(rng));
    std::vector<double> swabs(n);
    for (double& s : swabs) s = std::floor(20000.0 * U(rng));
    const auto stats = swab_stats(swabs);
    const double xi = -2.0 + 4.0 * U(rng);
    CHECK_THAT(swab_integral(n, swabs, stats, xi), WithinAbs(static_cast<double>(n), 1e-9));
    const SwabSchedule sched(swabs, stats);
    CHECK_THAT(sched.cumulative_weight(static_cast<double>(n), xi),
               WithinAbs(static_cast<double>(n), 1e-9));
  }
}

TEST_CASE("swab schedule agrees with the running sum", "[intervention]") {
  const auto swabs = testing::surrogate_swabs(30);
  const auto sched = SwabSchedule::from_window(swabs);
  for (std::size_t t = 0; t <= 30; ++t) {
    CHECK_THAT(sched.cumulative_weight(static_cast<double>(t), 0.3),
               WithinAbs(swab_integral(t, swabs, sched.stats(), 0.3), 1e-12));
  }
  // Linear inside a day.
  const double mid = sched.cumulative_weight(10.5, 0.3);
  CHECK_THAT(mid, WithinAbs(0.5 * (sched.cumulative_weight(10.0, 0.3) +
                                   sched.cumulative_weight(11.0, 0.3)), 1e-12));
  CHECK(sched.cumulative_weight(-1.0, 0.3) == -1.0);
  CHECK_THROWS(sched.cumulative_weight(30.5, 0.3));

  const std::vector<double> extra = {1000.0, 2000.0};
  const auto longer = sched.extended(extra);
  CHECK(longer.days() == 32);
  CHECK(longer.stats().mu_B == sched.stats().mu_B);
  CHECK(longer.stats().sigma_B == sched.stats().sigma_B);
  CHECK_THAT(longer.cumulative_weight(32.0, 0.3) - longer.cumulative_weight(30.0, 0.3),
             WithinAbs(swab_weight(1000.0, sched.stats(), 0.3) +
                           swab_weight(2000.0, sched.stats(), 0.3), 1e-12));
}
