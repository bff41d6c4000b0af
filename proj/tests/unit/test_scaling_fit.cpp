#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/scaling_fit.hpp"

using namespace conelab;

namespace {

std::vector<std::pair<double, double>> dyadic(int lo, int hi, double (*v)(double)) {
  std::vector<std::pair<double, double>> p;
  for (int k = lo; k <= hi; ++k) p.emplace_back(std::ldexp(1.0, -k), v(std::ldexp(1.0, -k)));
  return p;
}

}  // namespace

TEST_CASE("exact power law") {
  const auto f = fit_scaling(dyadic(3, 7, [](double d) { return d * d; }), FitModel::PurePower);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.points == 5);
}

TEST_CASE("delta log(1/delta) prefers the log model") {
  const auto pts = dyadic(3, 7, [](double d) { return d * std::log(1.0 / d); });
  const auto c = select_model(pts);
  CHECK(c.power_log.ssr < c.power.ssr);
  CHECK(c.preferred == FitModel::PowerTimesLog);
  CHECK(c.power_log.slope == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant values have slope zero") {
  const auto f = fit_scaling(dyadic(3, 9, [](double) { return 3.0; }), FitModel::PurePower);
  CHECK(std::abs(f.slope) < 1e-14);
}

TEST_CASE("fit rejects bad input") {
  CHECK_THROWS_AS(fit_scaling({{0.1, 1}, {0.2, 1}, {0.3, 1}}, FitModel::PurePower), ArgumentError);
  CHECK_THROWS_AS(fit_scaling({{0.1, 1}, {0.2, -1}, {0.3, 1}, {0.4, 1}}, FitModel::PurePower), ArgumentError);
  CHECK_THROWS_AS(fit_scaling({{0.1, 1}, {0.2, 0}, {0.3, 1}, {0.4, 1}}, FitModel::PurePower), ArgumentError);
}

TEST_CASE("Kendall tau extremes and ties") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(kendall_tau(x, {2, 4, 6, 8, 10}) == doctest::Approx(1.0));
  CHECK(kendall_tau(x, {5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  // one discordant pair out of ten
  CHECK(kendall_tau(x, {1, 2, 3, 5, 4}) == doctest::Approx(0.8));
  // tau-b with a tie in y: (C - D) / sqrt(10 * 9)
  CHECK(kendall_tau(x, {1, 2, 2, 3, 4}) == doctest::Approx(9.0 / std::sqrt(90.0)));
}

TEST_CASE("least squares line") {
  const auto l = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(l.slope == doctest::Approx(2.0));
  CHECK(l.intercept == doctest::Approx(1.0));
  CHECK(l.ssr < 1e-24);
}
