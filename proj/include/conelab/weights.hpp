#pragma once

#include <span>
#include <vector>

#include "conelab/grid.hpp"

namespace conelab {

/// w(x) = |x'|^{-alpha} |x_n|^{-beta}.
struct WeightParams {
  double alpha = 0.0;
  double beta = 0.0;

  /// Product-A2 window: alpha in (-(n-1), n-1), beta in (-1, 1).
  bool a2_admissible(int n) const;
  /// Trace window: alpha in [0, n-1), beta in [0, 1).
  bool trace_admissible(int n) const;
};

double weight_value(const WeightParams& w, std::span<const double> x);

/// (h^n sum |f|^2 w)^{1/2}.  The grid must carry the half-cell offset unless
/// alpha = beta = 0, so that no sample lies on {x' = 0} or {x_n = 0}.
double weighted_norm(const Field& f, const WeightParams& w);

/// (h^n sum |f|^p)^{1/p}; p = +inf gives max |f|.
double lp_norm(const Field& f, double p);

/// Dyadic approach to the singular planes: level m uses the cube
/// [d, d+1]^{n-1} x [d, d+1] with d = 2^{-m}.
struct RectangleSweep {
  int dim = 3;
  int levels = 20;
};

/// (avg_R w)(avg_R w^{-1}) for each level of the sweep.
std::vector<double> a2_sweep(const WeightParams& w, const RectangleSweep& sweep);

/// Max over the sweep of (avg_R w)(avg_R w^{-1}).
double a2_product_constant(const WeightParams& w, const RectangleSweep& sweep);

/// avg over [d, d+1]^k of |x|^{p}, by graded tensor Gauss-Legendre (k >= 2)
/// or in closed form (k = 1).
double cube_power_average(int k, double d, double p);

}  // namespace conelab
