#include "conelab/bumps.hpp"

#include <cmath>
#include <numbers>

#include "conelab/bessel.hpp"
#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"
#include "conelab/quadrature.hpp"

namespace conelab::bumps {

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // logistic form of g(x)/(g(x)+g(1-x)); S(1/2) = 1/2 exactly
  return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x)));
}

double smoothstep_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double s = smoothstep(x);
  return s * (1.0 - s) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)));
}

double eta(double t) { return 1.0 - smoothstep(2.0 * t - 1.0); }
double eta_deriv(double t) { return -2.0 * smoothstep_deriv(2.0 * t - 1.0); }

double psi(double t) { return eta(t) - eta(2.0 * t); }
double psi_deriv(double t) { return eta_deriv(t) - 2.0 * eta_deriv(2.0 * t); }

double collar_profile(double s) { return smoothstep(3.0 * s) * (1.0 - smoothstep(3.0 * s - 2.0)); }

double collar_profile_deriv(double s) {
  return 3.0 * smoothstep_deriv(3.0 * s) * (1.0 - smoothstep(3.0 * s - 2.0)) -
         3.0 * smoothstep(3.0 * s) * smoothstep_deriv(3.0 * s - 2.0);
}

double mu_delta(double r, double delta) {
  if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("mu_delta: delta must lie in (0, 1/4]");
  return collar_profile((1.0 - r) / delta);
}

double lp_base(double r) { return eta(0.5 * r) - eta(r); }

int lp_j0(double delta) {
  if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("lp_j0: delta must lie in (0, 1/4]");
  const double target = 2.0 * std::ceil(1.0 / delta);
  int j = 0;
  while (std::ldexp(1.0, j) < target) ++j;
  return j;
}

double lp_annulus(double r, int j, double delta) {
  const int j0 = lp_j0(delta);
  if (j < j0) throw ArgumentError("lp_annulus: j below j0(delta)");
  if (j == j0) return eta(std::ldexp(r, -j0 - 1));
  return lp_base(std::ldexp(r, -j));
}

namespace {

// J_nu(z) / (z/2)^nu with nu = k/2 - 1; entire in z.
double reduced_bessel(int k, double z) {
  if (k == 1) return std::cos(z) / std::sqrt(std::numbers::pi);
  if (k == 2) return bessel_j0(z);
  const double nu = 0.5 * k - 1.0;
  if (z < 1e-8) return 1.0 / std::tgamma(nu + 1.0);
  if (k == 3) return 2.0 * std::sin(z) / (z * std::sqrt(std::numbers::pi));
  return std::cyl_bessel_j(nu, z) / std::pow(0.5 * z, nu);
}

}  // namespace

SchwartzCap::SchwartzCap(double rho, int k) : rho_(rho), k_(k) {
  if (!(rho > 0.0 && rho <= 1.0 / 64.0)) throw ArgumentError("schwartz_cap: rho must lie in (0, 1/64]");
  if (k < 1) throw ArgumentError("schwartz_cap: dimension must be >= 1");
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
  const double m = gl_composite([&](double s) { return eta(s) * std::pow(s, k - 1); }, 0.0, 1.0, 16);
  c_ = 1.0 / (std::pow(rho, k) * sphere * m);
}

double SchwartzCap::hat(double xi_norm) const { return c_ * eta(xi_norm / rho_); }

double SchwartzCap::value(double x_norm) const {
  // phi(r) = 2 pi^{k/2} c rho^k int_0^1 eta(s) s^{k-1} Jhat(2 pi r rho s) ds
  const double nu = 0.5 * k_ - 1.0;
  const double z = 2.0 * std::numbers::pi * x_norm * rho_;
  const int panels = 16 + int(std::ceil(2.0 * x_norm * rho_));
  const double integral = gl_composite(
      [&](double s) { return eta(s) * std::pow(s, k_ - 1) * reduced_bessel(k_, z * s); }, 0.0, 1.0,
      panels);
  return 2.0 * std::pow(std::numbers::pi, nu + 1.0) * c_ * std::pow(rho_, k_) * integral;
}

AngularCollar::AngularCollar(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("angular_collar: delta must lie in (0, 1/4]");
  l0_ = int(std::lround(std::log2(1.0 / (10.0 * delta))));
}

double AngularCollar::piece(double dist, int l) const {
  if (l == kFar) return far(dist);
  if (!has_piece(l)) throw ArgumentError("angular_collar: l outside [10, l0]");
  if (l == 10) return eta(dist / std::ldexp(delta_, 10));
  return eta(dist / std::ldexp(delta_, l)) - eta(dist / std::ldexp(delta_, l - 1));
}

double AngularCollar::far(double dist) const {
  if (l0_ < 10) return 1.0;
  return 1.0 - eta(dist / std::ldexp(delta_, l0_));
}

double angular_collar(std::span<const double> xi, int l, double delta) {
  return AngularCollar(delta).piece(geometry::dist_to_cone(xi), l);
}

}  // namespace conelab::bumps
