#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "conelab/grid.hpp"
#include "conelab/operators.hpp"
#include "conelab/scaling_fit.hpp"
#include "conelab/weights.hpp"

namespace conelab::kernels {

/// K_delta = (m_delta)^vee, dilated to t^{n-1} K_delta(t x', x_n) when t != 1.
/// m_delta is even in xi' but not in xi_n, so the kernel is complex; it is even in x'.
Field kernel_Kdelta(const Grid& grid, double delta, double t = 1.0);

struct KernelPiece {
  int j = 0;
  std::optional<int> l;  // bumps::AngularCollar::kFar marks the residual piece
  double delta = 0.0;
  double t = 1.0;
  Field physical;
  Spectrum spectrum;
};

/// K_{j,t} = t^{n-1} K_j(t x', x_n), K_j = K_delta Psi_j; with l, the spectrum is
/// further multiplied by phi^_l and the physical side recomputed.
KernelPiece kernel_piece(const Grid& grid, int j, double delta, std::optional<int> l = std::nullopt, double t = 1.0);

/// Largest j with 2^{j+1} <= L/2.
int max_piece_scale(const Grid& grid);

inline constexpr int kWholeLattice = -1;

struct ShellSup {
  double value = 0.0;
  std::size_t points = 0;
  bool empty = true;
};

/// sup |K^_j| over lattice points with dist to the cone in [2^l delta, 2^{l+1} delta);
/// l = kWholeLattice takes every point, l = AngularCollar::kFar takes dist >= 1/2.
ShellSup offcone_spectrum_sup(const KernelPiece& piece, int l_probe);

/// int |Psi_j^(xi)| dxi on the grid lattice.
double psi_hat_l1(const Grid& grid, int j, double delta);

struct KlambdaQuadrature {
  int outer_points = 0;  // Gauss-Legendre nodes in xi_n; 0 = automatic
  int inner_points = 0;  // nodes in |xi'|; 0 = automatic
};

/// Minimal node counts giving 8 nodes per oscillation at (rho, x_n).
KlambdaQuadrature klambda_required(double rho, double x_n);

/// K_lambda at (|x'|, x_n) in n = 3 by the reduced 2-D integral
/// 2 pi int int (1 - r^2/xi_n^2)_+^lambda psi(xi_n) J0(2 pi r rho) e^{2 pi i x_n xi_n} r dr dxi_n.
cplx kernel_Klambda(double rho, double x_n, double lambda, KlambdaQuadrature q = {});

struct DecayProfile {
  double angle = 0.0;  // from the x_n axis
  std::vector<double> radii;
  std::vector<double> values;
  double exponent = 0.0;  // minus the log-log slope
  double r2 = 0.0;
};

/// |K_lambda| along the ray at `angle` from the x_n axis, fitted as |x|^{-exponent}.
DecayProfile klambda_decay(double lambda, double angle, const std::vector<double>& radii);

enum class Region { E1 = 1, E2 = 2, E3 = 3, E4 = 4 };

struct CubeLattice {
  int dim = 0;
  int j = 0;
  double c1 = 1.0;
  double side = 0.0;
  int per_axis = 0;
  std::array<long, 4> counts{};

  /// Index i of the cube Q(side i, side) holding x (periodic wrap to [-m/2, m/2)).
  void cube_of(const double* x, int* i) const;
  Region classify(const int* i) const;
};

/// Cubes of side c1 2^j; c1 is adjusted within [1/2, 2] so the side divides L.
CubeLattice region_partition(const Grid& grid, int j, double c1 = 1.0);

/// Local computation of ||(int_1^2 |K_{j,t} * f|^2 dt/t)^{1/2}||_{L^2(w)} / ||f||_{L^2(w)}
/// for f supported in the single cube Q_i.  Work happens in a periodic window of
/// side `window` centered on the cube; the kernel support must fit inside it.
struct CubeRatio {
  std::vector<double> ratios;
  double w_min = 0.0;  // weight range over the window samples
  double w_max = 0.0;
  double side = 0.0;
  Region region = Region::E3;
};

struct CubeProblem {
  int dim = 2;
  double delta = 0.25;
  int j = 0;  // 0 = j0(delta)
  std::vector<int> cube;  // cube index i
  double window = 64.0;
  int points = 512;
  int fields = 20;
  std::uint64_t seed = 1;
};

CubeRatio cube_square_ratio(const CubeProblem& p, const WeightParams& w);

/// ||G f||_{L^2(w)} / ||f||_{L^2(w)} with G the square function of m_delta over t in [1, 2].
/// Both weights share the transforms.  The grid must carry the half-cell offset.
struct G0Sample {
  std::vector<std::vector<double>> ratios;  // [weight][field]
};
G0Sample g0_weighted_ratios(const Grid& grid, double delta, const std::vector<WeightParams>& weights,
                            const std::vector<Field>& fields, const TGrid& tg);

}  // namespace conelab::kernels
