#pragma once

#include <span>
#include <string>

namespace conelab {

enum class Family {
  ConeFull,           // (1 - |xi'|^2/xi_n^2)_+^lambda
  ConeLocalized,      // cone-full times psi(xi_n/2)
  AngularDyadic,      // m_gamma; gamma == 0 is the remainder m_0
  AngularDyadicGrad,  // (2^{-gamma} xi') . grad_{xi'} m_gamma
  DeltaCollar,        // mu_delta(|xi'|/xi_n) psi(xi_n/2)
  BandPsi,            // psi(2^{-k-1} xi_n)
  CapPhi,             // eta(|xi'|/|xi_n|)
};

std::string family_name(Family f);

struct MultiplierSpec {
  Family family = Family::ConeLocalized;
  double lambda = 1.0;
  int gamma = 0;
  double delta = 0.125;
  int k = 0;

  static MultiplierSpec cone_full(double lambda);
  static MultiplierSpec cone_localized(double lambda);
  static MultiplierSpec angular_dyadic(int gamma, double lambda);
  static MultiplierSpec angular_dyadic_grad(int gamma, double lambda);
  static MultiplierSpec delta_collar(double delta);
  static MultiplierSpec band_psi(int k);
  static MultiplierSpec cap_phi();

  /// Checks the parameter ranges; throws ArgumentError.
  void validate() const;

  /// Largest |xi_i| over the closed support after dilating xi' by t, or a
  /// negative value when the support is unbounded.
  double support_radius(double t) const;

  /// Angular resolution scale the t-quadrature must resolve (delta or
  /// 2^{-gamma}); 0 when the family has no collar.
  double collar_scale() const;
};

namespace multipliers {

/// u = 1 - |xi'|^2/xi_n^2 (returns -inf when xi_n == 0 and xi' != 0).
double aperture(std::span<const double> xi);

double eval(const MultiplierSpec& spec, std::span<const double> xi);

/// Every family depends on xi only through (r, h) = (|xi'|, xi_n).
double eval_radial(const MultiplierSpec& spec, double r, double h);

/// Evaluates at the anisotropically dilated point (t^{-1} xi', xi_n).
double eval_dilated(const MultiplierSpec& spec, std::span<const double> xi, double t);

double eval_grad_tilde(int gamma, double lambda, std::span<const double> xi);

double reconstruct_residual(double lambda, int gamma_max, std::span<const double> xi);

/// Closed-form support membership (closure) of each family.
bool in_support(const MultiplierSpec& spec, std::span<const double> xi);

}  // namespace multipliers
}  // namespace conelab
