#include <cmath>
#include <vector>

#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/multipliers.hpp"
#include "conelab/rng.hpp"

using namespace conelab;

namespace {

// uniform direction, xi_n in [1/2, 2], aperture log-uniform in [u_min, 1]
std::vector<double> sample_xi(Rng& r, int n, double u_min) {
  std::vector<double> xi(n);
  const double h = 0.5 + 1.5 * r.uniform();
  const double u = std::exp(std::log(u_min) * r.uniform());
  double dir[8];
  r.sphere(n - 1, dir);
  for (int a = 0; a < n - 1; ++a) xi[a] = h * std::sqrt(1 - u) * dir[a];
  xi[n - 1] = h;
  return xi;
}

}  // namespace

TEST_CASE("dyadic reconstruction of the localized cone multiplier") {
  Rng r(11, 0);
  for (int n : {2, 3, 4})
    for (double lambda : {0.5, 1.0, 2.5})
      for (int i = 0; i < 3000; ++i) {
        const auto xi = sample_xi(r, n, std::ldexp(1.0, -13));
        CHECK(multipliers::reconstruct_residual(lambda, 12, xi) <= 1e-12);
      }
}

TEST_CASE("the pieces add up term by term") {
  Rng r(12, 0);
  for (int i = 0; i < 500; ++i) {
    const auto xi = sample_xi(r, 3, 1e-4);
    const double lambda = 1.5;
    double s = multipliers::eval(MultiplierSpec::angular_dyadic(0, lambda), xi);
    for (int g = 1; g <= 16; ++g) s += std::pow(2.0, -g * lambda) * multipliers::eval(MultiplierSpec::angular_dyadic(g, lambda), xi);
    CHECK(s == doctest::Approx(multipliers::eval(MultiplierSpec::cone_localized(lambda), xi)).epsilon(1e-13));
  }
}

TEST_CASE("radial gradient piece against finite differences") {
  const double lambda = 1.0;
  for (int g : {1, 3, 5}) {
    const auto spec = MultiplierSpec::angular_dyadic(g, lambda);
    for (double h : {0.8, 1.3})
      for (double s : {0.2, 0.5, 0.8}) {
        // pick r with 2^g u = 0.25 + 0.75 s inside the psi support
        const double u = std::ldexp(0.25 + 0.75 * s, -g);
        const double r = h * std::sqrt(1 - u);
        const double eps = 1e-7 * r * std::ldexp(1.0, -g);
        const double d = (multipliers::eval_radial(spec, r + eps, h) - multipliers::eval_radial(spec, r - eps, h)) /
                         (2 * eps);
        const double xi[3] = {r, 0.0, h};
        CHECK(multipliers::eval_grad_tilde(g, lambda, xi) == doctest::Approx(std::ldexp(r * d, -g)).epsilon(1e-5));
      }
  }
}

TEST_CASE("closed-form values") {
  const double xi[3] = {0.3, 0.4, 1.0};
  CHECK(multipliers::eval(MultiplierSpec::cone_full(2.0), xi) == doctest::Approx(std::pow(1 - 0.25, 2.0)));
  CHECK(multipliers::eval(MultiplierSpec::cone_localized(1.0), xi) == doctest::Approx(0.75));  // psi(1/2) = 1
  const double on[2] = {1.0 - 0.0625, 1.0};
  CHECK(multipliers::eval(MultiplierSpec::delta_collar(0.125), on) == 1.0);
  const double off[2] = {1.01, 1.0};
  CHECK(multipliers::eval(MultiplierSpec::delta_collar(0.125), off) == 0.0);
  const double band[2] = {5.0, 4.0};
  CHECK(multipliers::eval(MultiplierSpec::band_psi(2), band) == 1.0);
  const double cap[2] = {0.2, -1.0};
  CHECK(multipliers::eval(MultiplierSpec::cap_phi(), cap) == 1.0);
  const double dil[2] = {1.8, 1.0};
  CHECK(multipliers::eval_dilated(MultiplierSpec::cone_full(1.0), dil, 2.0) == doctest::Approx(1 - 0.81));
  CHECK(multipliers::aperture(dil) == doctest::Approx(1 - 3.24));
}

TEST_CASE("nonzero values lie in the closed support") {
  Rng r(13, 0);
  const std::vector<MultiplierSpec> specs = {
      MultiplierSpec::cone_full(1.0),          MultiplierSpec::cone_localized(0.5),
      MultiplierSpec::angular_dyadic(0, 1.0),  MultiplierSpec::angular_dyadic(4, 1.0),
      MultiplierSpec::angular_dyadic_grad(3, 1.0), MultiplierSpec::delta_collar(0.0625),
      MultiplierSpec::band_psi(1),             MultiplierSpec::cap_phi()};
  for (int i = 0; i < 20000; ++i) {
    const double xi[2] = {4 * r.uniform() - 2, 5 * r.uniform() - 1};
    for (const auto& s : specs)
      if (multipliers::eval(s, xi) != 0.0) CHECK(multipliers::in_support(s, xi));
  }
}

TEST_CASE("parameter validation and support radius") {
  CHECK_THROWS_AS(MultiplierSpec::cone_full(0.0).validate(), ArgumentError);
  CHECK_THROWS_AS(MultiplierSpec::angular_dyadic(-1, 1.0).validate(), ArgumentError);
  CHECK_THROWS_AS(MultiplierSpec::angular_dyadic_grad(0, 1.0).validate(), ArgumentError);
  CHECK_THROWS_AS(MultiplierSpec::delta_collar(0.5).validate(), ArgumentError);
  CHECK_NOTHROW(MultiplierSpec::delta_collar(0.25).validate());
  CHECK(MultiplierSpec::delta_collar(0.1).support_radius(3.0) == 6.0);
  CHECK(MultiplierSpec::cone_full(1.0).support_radius(1.0) < 0.0);
  CHECK(MultiplierSpec::delta_collar(0.1).collar_scale() == 0.1);
  CHECK(MultiplierSpec::angular_dyadic(3, 1.0).collar_scale() == 0.125);
}
