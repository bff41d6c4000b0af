#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conelab/grid.hpp"
#include "conelab/scaling_fit.hpp"
#include "conelab/weights.hpp"

namespace conelab::trace {

/// Exact distance to {|xi'| = xi_n in [1, 2]}.
double dist_to_cone(std::span<const double> xi);

struct McSpec {
  long samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  bool stratified = true;
};

struct StratumEstimate {
  std::string label;  // "S0", "S<l>", "Sinf<i>" or "all"
  double r_lo = 0.0, r_hi = 0.0;
  long samples = 0;
  double value = 0.0, stderr_ = 0.0;
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::vector<StratumEstimate> strata;
  double rel_error() const { return value > 0.0 ? stderr_ / value : 0.0; }
};

/// Largest l with S_l a stratum: floor(1/(1000 delta)).
int max_stratum(double delta);

/// Monte-Carlo estimate of int_{Gamma_delta - x} |z'|^{alpha-(n-1)} |z_n|^{beta-1} dz.
/// z' is drawn per radial stratum with density proportional to |z'|^{alpha-(n-1)};
/// the z_n integral over the collar slice is done in closed form.
Estimate schur_integral(std::span<const double> x, const WeightParams& w, double delta, const McSpec& mc);

/// Same estimator with the integrand set to 1 (alpha = n-1, beta = 1): vol(Gamma_delta).
Estimate collar_volume(std::span<const double> x, double delta, const McSpec& mc);

/// Lateral area of the truncated cone in R^n.
double cone_area(int n);

/// Fourier constant c with (|x|^{-a})^ = c |xi|^{a-d} in R^d, 0 < a < d.
double riesz_constant(int d, double a);

/// Constant mapping the Schur integral to an operator-norm bound for w.
double schur_kernel_constant(int n, const WeightParams& w);

struct UpperResult {
  double value = 0.0;
  double stderr_ = 0.0;
  std::vector<double> argmax;
  std::vector<Estimate> per_point;
};

/// Probe points in Gamma_delta: on the cone, at normal offsets +-delta/2 and
/// +-0.9 delta, near both ends.
std::vector<std::vector<double>> probe_points(int n, double delta);

/// Max of schur_integral over probe_points (samples per point in mc).
UpperResult trace_constant_upper(int n, double delta, const WeightParams& w, const McSpec& mc);

struct LowerResult {
  double value = 0.0;
  std::vector<double> ratios;  // collar indicator first, then random fields
};

/// Max over collar-supported g of int |g_check|^2 w / int |g|^2; the grid must
/// carry the half-cell offset, resolve delta (1/L <= delta/8) and hold the
/// collar below Nyquist.
LowerResult trace_constant_lower(const Grid& grid, double delta, const WeightParams& w, int random_fields,
                                 std::uint64_t seed);

/// Closed form (2/beta) delta^beta of sup_x int_{a-delta}^{a+delta} |x-y|^{beta-1} dy.
double interval_trace_sup(double delta, double beta);

struct IntervalCheck {
  double closed_form = 0.0;
  double quadrature_sup = 0.0;
  double argmax_offset = 0.0;  // x - a at the quadrature maximum
  double rel_error = 0.0;
};

/// Adaptive quadrature of the row integral at offsets across the interval.
IntervalCheck interval_trace_check(double delta, double beta, int offsets = 41);

/// Schur integral for the sphere collar {||y| - 1| < delta} in R^k with kernel |z|^{alpha-k}.
Estimate sphere_schur_integral(std::span<const double> x, double alpha, double delta, const McSpec& mc);

/// Max over probe points |x| in {1, 1 +- delta/2}.
UpperResult sphere_trace_upper(int n, double delta, double alpha, const McSpec& mc);

struct Sweep {
  std::vector<std::pair<double, double>> points;
  std::vector<double> stderrs;
  ModelChoice fit;
};

Sweep sphere_trace_sweep(const std::vector<double>& deltas, double alpha, int n, const McSpec& mc);

struct SliceEstimate {
  double volume = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;  // l^{(n-2)/2} (l+10-k)^{(n-4)/2} delta^{n-1}
  bool empty = false;
};

/// Volume of (S_{l delta} + B_delta) cap (S_{x_n+z_n} - x' + B_delta) in R^{n-1}
/// at z_n = (k - 1 + band_pos) delta, for x = (x_n e_1, x_n) on the cone.
SliceEstimate slice_volume_mc(int n, int l, int k, double delta, double x_n, long samples, std::uint64_t seed,
                              double band_pos = 0.5);

}  // namespace conelab::trace
