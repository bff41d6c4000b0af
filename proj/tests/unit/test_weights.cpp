#include <cmath>
#include <vector>

#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/grid.hpp"
#include "conelab/weights.hpp"

using namespace conelab;

namespace {

// midpoint rule over [d, d+1]^k, fine enough for d >= 1/4
double brute_cube_average(int k, double d, double p, int m) {
  double s = 0;
  std::vector<int> i(k, 0);
  while (true) {
    double r2 = 0;
    for (int a = 0; a < k; ++a) {
      const double x = d + (i[a] + 0.5) / m;
      r2 += x * x;
    }
    s += std::pow(r2, 0.5 * p);
    int a = k - 1;
    while (a >= 0 && ++i[a] == m) i[a--] = 0;
    if (a < 0) break;
  }
  return s / std::pow(m, k);
}

}  // namespace

TEST_CASE("unweighted norm is the L2 norm") {
  const Grid g(2, 16, 4.0, true);
  const Field f = Field::from_function(g, [](const double* x) { return cplx(std::exp(-x[0] * x[0]), x[1]); });
  CHECK(weighted_norm(f, {}) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
  CHECK(lp_norm(f, INFINITY) == doctest::Approx(max_abs(f)));
}

TEST_CASE("weighted norm against direct summation") {
  const Grid g(3, 8, 2.0, true);
  const Field f = Field::from_function(g, [](const double* x) { return cplx(1.0 + x[0] * x[2], 0.0); });
  const WeightParams w{0.7, 0.4};
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x[3];
    g.point(i, x);
    const double xp = std::hypot(x[0], x[1]);
    s += std::norm(f[i]) * std::pow(xp, -0.7) * std::pow(std::abs(x[2]), -0.4);
  }
  CHECK(weighted_norm(f, w) == doctest::Approx(std::sqrt(s * g.cell_volume())).epsilon(1e-12));
  CHECK_THROWS_AS(weighted_norm(Field(g.with_offset(false)), w), GeometryError);
}

TEST_CASE("cube power averages") {
  // closed form on an interval: ((d+1)^{p+1} - d^{p+1}) / (p+1)
  CHECK(cube_power_average(1, 0.5, 2.0) == doctest::Approx((std::pow(1.5, 3) - 0.125) / 3));
  CHECK(cube_power_average(1, 0.5, -1.0) == doctest::Approx(std::log(3.0)));
  CHECK(cube_power_average(3, 0.7, 0.0) == 1.0);
  // |x|^2 averages to k (d^2 + d + 1/3)
  for (int k : {2, 3})
    CHECK(cube_power_average(k, 0.3, 2.0) == doctest::Approx(k * (0.09 + 0.3 + 1.0 / 3)).epsilon(1e-12));
  for (double p : {-1.3, 0.6})
    CHECK(cube_power_average(2, 0.25, p) == doctest::Approx(brute_cube_average(2, 0.25, p, 800)).epsilon(1e-5));
  CHECK_THROWS_AS(cube_power_average(2, 0.0, 1.0), ArgumentError);
}

TEST_CASE("A2 products") {
  CHECK(a2_product_constant({}, {3, 10}) == doctest::Approx(1.0));
  // Cauchy-Schwarz: every product is at least 1
  for (double v : a2_sweep({1.2, 0.6}, {3, 16})) CHECK(v >= 1.0 - 1e-12);
  // inside the window the products settle as the cube approaches the planes
  const auto in = a2_sweep({0.5, 0.3}, {3, 22});
  CHECK(std::abs(in[22] / in[21] - 1.0) < 0.01);
  CHECK(WeightParams{1.9, 0.9}.a2_admissible(3));
  CHECK_FALSE(WeightParams{2.1, 0.2}.a2_admissible(3));
  CHECK_FALSE(WeightParams{0.5, 1.0}.trace_admissible(3));
}
