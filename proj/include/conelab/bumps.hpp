#pragma once

#include <span>

namespace conelab::bumps {

/// S(x) = g(x)/(g(x)+g(1-x)) with g(x) = exp(-1/x) on x > 0.
double smoothstep(double x);
double smoothstep_deriv(double x);

/// eta(t) = 1 - S(2t-1): equal to 1 on t <= 1/2 and 0 on t >= 1.
double eta(double t);
double eta_deriv(double t);

/// psi(t) = eta(t) - eta(2t), supported in [1/4, 1], psi(1/2) = 1.
double psi(double t);
double psi_deriv(double t);

/// B(s) = S(3s)(1 - S(3s-2)); support (0,1), plateau [1/3, 2/3].
double collar_profile(double s);
double collar_profile_deriv(double s);

/// mu_delta(r) = B((1-r)/delta); support (1-delta, 1).
double mu_delta(double r, double delta);

/// Annulus bump Psi(r) = eta(r/2) - eta(r) at radius r = |x|.
double lp_base(double r);

/// j0 with 2^{j0} = 2*ceil(1/delta) rounded up to a power of two.
int lp_j0(double delta);

/// Psi_j at radius r.  j == j0 uses the closed remainder eta(2^{-j0-1} r).
double lp_annulus(double r, int j, double delta);

/// Radial cap phi^ = c B0(|xi|/rho), B0 = eta, normalized so phi(0) = 1 in R^k.
class SchwartzCap {
 public:
  SchwartzCap(double rho, int k);

  double rho() const { return rho_; }
  int dim() const { return k_; }
  double normalization() const { return c_; }

  double hat(double xi_norm) const;
  /// phi(|x|) by composite Gauss-Legendre quadrature of the radial inverse transform.
  double value(double x_norm) const;

 private:
  double rho_;
  int k_;
  double c_;
};

/// Angular collar family phi^_l(xi), l in [10, l0], plus the far piece.
class AngularCollar {
 public:
  static constexpr int kFar = 1 << 30;

  explicit AngularCollar(double delta);

  double delta() const { return delta_; }
  int l0() const { return l0_; }
  /// True when 10 <= l <= l0 (empty whenever l0 < 10).
  bool has_piece(int l) const { return l >= 10 && l <= l0_; }

  /// phi^_l at distance d from the cone; l == kFar gives the residual piece.
  double piece(double dist, int l) const;
  double far(double dist) const;

 private:
  double delta_;
  int l0_;
};

/// phi^_l(xi) with the distance taken from the truncated cone.
double angular_collar(std::span<const double> xi, int l, double delta);

}  // namespace conelab::bumps
