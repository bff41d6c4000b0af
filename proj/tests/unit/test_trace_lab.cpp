#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/grid.hpp"
#include "conelab/trace_lab.hpp"

using namespace conelab;
using namespace conelab::trace;

TEST_CASE("distance to the truncated cone") {
  CHECK(dist_to_cone(std::vector<double>{0.0, 1.5}) == doctest::Approx(std::sqrt(1.25)));
  CHECK(dist_to_cone(std::vector<double>{3.0, 3.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(dist_to_cone(std::vector<double>{0.0, 1.5, 1.5}) == doctest::Approx(0.0));
  // straight off the middle of a generator
  CHECK(dist_to_cone(std::vector<double>{1.6, 1.4}) == doctest::Approx(0.2 / std::sqrt(2.0)));
}

TEST_CASE("Riesz constants") {
  for (int d : {1, 2, 3}) CHECK(riesz_constant(d, 0.5 * d) == doctest::Approx(1.0));
  // d = 1, a = 1/2 against the Gamma formula written out
  const double a = 0.3;
  CHECK(riesz_constant(1, a) ==
        doctest::Approx(std::pow(std::numbers::pi, a - 0.5) * std::tgamma(0.5 - 0.5 * a) / std::tgamma(0.5 * a)));
  CHECK_THROWS_AS(riesz_constant(2, 2.0), ArgumentError);
}

TEST_CASE("interval trace") {
  CHECK(interval_trace_sup(0.01, 0.5) == doctest::Approx(0.4));
  const auto c = interval_trace_check(std::ldexp(1.0, -10), 0.9);
  CHECK(c.rel_error <= 0.005);
  CHECK(std::abs(c.argmax_offset) < 1e-12);
  double prev = 0;
  for (int k = 12; k >= 2; --k) {
    const double v = interval_trace_sup(std::ldexp(1.0, -k), 0.3);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(interval_trace_sup(0.1, 1.0), ArgumentError);
}

TEST_CASE("collar volume matches 2 delta times the cone area") {
  const double delta = 1.0 / 32;
  const std::vector<double> x{1.5, 0.0, 1.5};
  const auto v = collar_volume(x, delta, {200000, 3, 0, true});
  CHECK(v.value == doctest::Approx(2 * delta * cone_area(3)).epsilon(0.03));
  CHECK(cone_area(3) == doctest::Approx(3 * std::numbers::pi * std::sqrt(2.0)));
}

TEST_CASE("Schur integral: precision, strata and symmetry") {
  const double delta = 1.0 / 32;
  const WeightParams w{0.5, 0.5};
  const std::vector<double> x{1.5, 0.0, 1.5}, xr{0.0, 1.5, 1.5};
  const auto e = schur_integral(x, w, delta, {1000000, 5, 0, true});
  CHECK(e.value > 0);
  CHECK(e.rel_error() <= 0.02);

  double sum = 0;
  for (const auto& s : e.strata) sum += s.value;
  CHECK(sum == doctest::Approx(e.value).epsilon(1e-12));

  const auto flat = schur_integral(x, w, delta, {1000000, 5, 1, false});
  CHECK(std::abs(flat.value - e.value) <= 3 * std::hypot(flat.stderr_, e.stderr_));

  const auto rot = schur_integral(xr, w, delta, {1000000, 5, 2, true});
  CHECK(std::abs(rot.value - e.value) <= 3 * std::hypot(rot.stderr_, e.stderr_));

  CHECK_THROWS_AS(schur_integral(x, {0.0, 0.5}, delta, {}), ArgumentError);
  CHECK_THROWS_AS(schur_integral(std::vector<double>{1.0, 0.0, 1.5}, w, delta, {}), ArgumentError);
}

TEST_CASE("Schur ordering of the lower and upper proxies in n = 2") {
  const double delta = 0.125;
  const Grid g(2, 512, 64.0, true);
  for (const WeightParams w : {WeightParams{0.3, 0.3}, WeightParams{0.6, 0.5}}) {
    const auto lo = trace_constant_lower(g, delta, w, 6, 9);
    const auto up = trace_constant_upper(2, delta, w, {100000, 9, 0, true});
    const double slack = 1 + 10 * up.stderr_ / up.value;
    CHECK(lo.value > 0);
    CHECK(lo.value <= schur_kernel_constant(2, w) * up.value * slack);
  }
  // no weight: discrete Plancherel gives exactly 1
  for (double r : trace_constant_lower(g, delta, {}, 3, 1).ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(trace_constant_lower(Grid(2, 512, 32.0, true), delta, {}, 0, 1), ResolutionError);
}

TEST_CASE("slice volumes") {
  const double delta = std::ldexp(1.0, -16);
  CHECK(max_stratum(delta) == 65);
  const auto a = slice_volume_mc(3, 1, 1, delta, 1.5, 50000, 7);
  CHECK_FALSE(a.empty);
  CHECK(a.volume > 0);
  CHECK(a.volume <= 4 * std::numbers::pi * delta * delta);
  CHECK(a.bound == doctest::Approx(std::pow(10.0, -0.5) * delta * delta));

  const auto b = slice_volume_mc(3, 9, 4, delta, 1.5, 1000, 7);
  CHECK(b.bound == doctest::Approx(3.0 * std::pow(15.0, -0.5) * delta * delta));

  // the outer sphere stays beyond the ring when k > l + 2
  const auto e = slice_volume_mc(3, 1, 6, delta, 1.5, 1000, 7);
  CHECK(e.empty);
  CHECK(e.volume == 0.0);
  CHECK_THROWS_AS(slice_volume_mc(3, 66, 1, delta, 1.5, 1000, 7), ArgumentError);
}
