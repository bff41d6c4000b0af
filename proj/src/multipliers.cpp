#include "conelab/multipliers.hpp"

#include <algorithm>
#include <cmath>

#include "conelab/bumps.hpp"
#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"

namespace conelab {

std::string family_name(Family f) {
  switch (f) {
    case Family::ConeFull: return "cone-full";
    case Family::ConeLocalized: return "cone-localized";
    case Family::AngularDyadic: return "angular-dyadic";
    case Family::AngularDyadicGrad: return "angular-dyadic-grad";
    case Family::DeltaCollar: return "delta-collar";
    case Family::BandPsi: return "band-psi";
    case Family::CapPhi: return "cap-phi";
  }
  return "?";
}

MultiplierSpec MultiplierSpec::cone_full(double lambda) {
  MultiplierSpec s;
  s.family = Family::ConeFull;
  s.lambda = lambda;
  return s;
}
MultiplierSpec MultiplierSpec::cone_localized(double lambda) {
  MultiplierSpec s;
  s.family = Family::ConeLocalized;
  s.lambda = lambda;
  return s;
}
MultiplierSpec MultiplierSpec::angular_dyadic(int gamma, double lambda) {
  MultiplierSpec s;
  s.family = Family::AngularDyadic;
  s.gamma = gamma;
  s.lambda = lambda;
  return s;
}
MultiplierSpec MultiplierSpec::angular_dyadic_grad(int gamma, double lambda) {
  MultiplierSpec s;
  s.family = Family::AngularDyadicGrad;
  s.gamma = gamma;
  s.lambda = lambda;
  return s;
}
MultiplierSpec MultiplierSpec::delta_collar(double delta) {
  MultiplierSpec s;
  s.family = Family::DeltaCollar;
  s.delta = delta;
  return s;
}
MultiplierSpec MultiplierSpec::band_psi(int k) {
  MultiplierSpec s;
  s.family = Family::BandPsi;
  s.k = k;
  return s;
}
MultiplierSpec MultiplierSpec::cap_phi() {
  MultiplierSpec s;
  s.family = Family::CapPhi;
  return s;
}

void MultiplierSpec::validate() const {
  switch (family) {
    case Family::ConeFull:
    case Family::ConeLocalized:
      if (!(lambda > 0.0)) throw ArgumentError("multiplier: lambda must be positive");
      break;
    case Family::AngularDyadic:
      if (!(lambda > 0.0)) throw ArgumentError("multiplier: lambda must be positive");
      if (gamma < 0) throw ArgumentError("multiplier: gamma must be >= 0");
      break;
    case Family::AngularDyadicGrad:
      if (!(lambda > 0.0)) throw ArgumentError("multiplier: lambda must be positive");
      if (gamma < 1) throw ArgumentError("multiplier: gradient family needs gamma >= 1");
      break;
    case Family::DeltaCollar:
      if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("multiplier: delta must lie in (0, 1/4]");
      break;
    case Family::BandPsi:
    case Family::CapPhi:
      break;
  }
}

double MultiplierSpec::support_radius(double t) const {
  switch (family) {
    case Family::ConeLocalized:
    case Family::AngularDyadic:
    case Family::AngularDyadicGrad:
    case Family::DeltaCollar:
      return 2.0 * std::max(t, 1.0);
    default:
      return -1.0;
  }
}

double MultiplierSpec::collar_scale() const {
  switch (family) {
    case Family::DeltaCollar: return delta;
    case Family::AngularDyadic:
    case Family::AngularDyadicGrad: return std::ldexp(1.0, -gamma);
    default: return 0.0;
  }
}

namespace multipliers {

namespace {

double u_of(double r, double h) {
  if (h == 0.0) return r == 0.0 ? 0.0 : -INFINITY;
  const double s = r / h;
  return 1.0 - s * s;
}

double cone_power(double u, double lambda) { return u > 0.0 ? std::pow(u, lambda) : 0.0; }

double localized(double r, double h, double lambda) {
  if (h <= 0.0) return 0.0;
  const double band = bumps::psi(0.5 * h);
  if (band == 0.0) return 0.0;
  return cone_power(u_of(r, h), lambda) * band;
}

double dyadic_piece(double r, double h, int gamma, double lambda) {
  const double m = localized(r, h, lambda);
  if (m == 0.0) return 0.0;
  const double u = u_of(r, h);
  if (gamma == 0) return m * (1.0 - bumps::eta(2.0 * u));
  return std::pow(2.0, gamma * lambda) * bumps::psi(std::ldexp(u, gamma)) * m;
}

double grad_piece(double r, double h, int gamma, double lambda) {
  if (h <= 0.0 || r == 0.0) return 0.0;
  const double band = bumps::psi(0.5 * h);
  if (band == 0.0) return 0.0;
  const double u = u_of(r, h);
  const double a = std::ldexp(u, gamma);
  if (!(a > 0.25 && a < 1.0)) return 0.0;
  const double dF = std::ldexp(bumps::psi_deriv(a), gamma) * std::pow(u, lambda) +
                    lambda * bumps::psi(a) * std::pow(u, lambda - 1.0);
  const double r_du_dr = -2.0 * (r / h) * (r / h);
  return std::ldexp(std::pow(2.0, gamma * lambda) * band * dF * r_du_dr, -gamma);
}

double radial_value(const MultiplierSpec& s, double r, double h) {
  switch (s.family) {
    case Family::ConeFull:
      return cone_power(u_of(r, h), s.lambda);
    case Family::ConeLocalized:
      return localized(r, h, s.lambda);
    case Family::AngularDyadic:
      return dyadic_piece(r, h, s.gamma, s.lambda);
    case Family::AngularDyadicGrad:
      return grad_piece(r, h, s.gamma, s.lambda);
    case Family::DeltaCollar:
      if (h <= 0.0) return 0.0;
      return bumps::mu_delta(r / h, s.delta) * bumps::psi(0.5 * h);
    case Family::BandPsi:
      return bumps::psi(std::ldexp(h, -s.k - 1));
    case Family::CapPhi:
      if (h == 0.0) return r == 0.0 ? 1.0 : 0.0;
      return bumps::eta(r / std::abs(h));
  }
  return 0.0;
}

}  // namespace

double eval_radial(const MultiplierSpec& spec, double r, double h) { return radial_value(spec, r, h); }

double aperture(std::span<const double> xi) { return u_of(geometry::radial_part(xi), xi.back()); }

double eval(const MultiplierSpec& spec, std::span<const double> xi) {
  return radial_value(spec, geometry::radial_part(xi), xi.back());
}

double eval_dilated(const MultiplierSpec& spec, std::span<const double> xi, double t) {
  return radial_value(spec, geometry::radial_part(xi) / t, xi.back());
}

double eval_grad_tilde(int gamma, double lambda, std::span<const double> xi) {
  if (gamma < 1) throw ArgumentError("eval_grad_tilde: gamma must be >= 1");
  return grad_piece(geometry::radial_part(xi), xi.back(), gamma, lambda);
}

double reconstruct_residual(double lambda, int gamma_max, std::span<const double> xi) {
  if (gamma_max < 1) throw ArgumentError("reconstruct_residual: gamma_max must be >= 1");
  const double r = geometry::radial_part(xi), h = xi.back();
  const double target = localized(r, h, lambda);
  double sum = dyadic_piece(r, h, 0, lambda);
  for (int g = 1; g <= gamma_max; ++g) sum += std::pow(2.0, -g * lambda) * dyadic_piece(r, h, g, lambda);
  return std::abs(sum - target);
}

bool in_support(const MultiplierSpec& s, std::span<const double> xi) {
  const double r = geometry::radial_part(xi), h = xi.back();
  const bool band = h >= 0.5 && h <= 2.0;
  const double u = u_of(r, h);
  switch (s.family) {
    case Family::ConeFull:
      return h != 0.0 && r <= std::abs(h);
    case Family::ConeLocalized:
      return band && r <= h;
    case Family::AngularDyadic:
      if (s.gamma == 0) return band && u >= 0.25;
      return band && u >= std::ldexp(1.0, -s.gamma - 2) && u <= std::ldexp(1.0, -s.gamma);
    case Family::AngularDyadicGrad:
      return band && r > 0.0 && u >= std::ldexp(1.0, -s.gamma - 2) && u <= std::ldexp(1.0, -s.gamma);
    case Family::DeltaCollar:
      return band && r >= (1.0 - s.delta) * h && r <= h;
    case Family::BandPsi:
      return h >= std::ldexp(1.0, s.k - 1) && h <= std::ldexp(1.0, s.k + 1);
    case Family::CapPhi:
      return (h == 0.0 && r == 0.0) || (h != 0.0 && r <= std::abs(h));
  }
  return true;
}

}  // namespace multipliers
}  // namespace conelab
