#pragma once

#include <vector>

#include "conelab/grid.hpp"

namespace conelab {

/// Geometric grid of dilations t_i = t_min (t_max/t_min)^{i/(count-1)}.
struct TGrid {
  double t_min = 1.0;
  double t_max = 2.0;
  int count = 2;

  static TGrid make(double t_min, double t_max, int count);
  /// Smallest grid meeting the collar-resolution rule count >= ceil(16 log(t_max/t_min)/scale).
  static TGrid resolving(double t_min, double t_max, double scale);
  static int required_count(double t_min, double t_max, double scale);

  double node(int i) const;
  std::vector<double> nodes() const;
  /// Trapezoid weights for dt/t (trapezoid in log t).
  std::vector<double> log_weights() const;
  /// Nested refinement: 2*count - 1 nodes containing the current ones.
  TGrid refined() const;
};

struct SectorIndex {
  int beta = 0;
  double delta = 0.125;
};

Field apply_T(const Field& f, const MultiplierSpec& spec, double t);

/// Pointwise max over the t-grid of |T_t f|.
Field maximal(const Field& f, const MultiplierSpec& spec, const TGrid& tg);

/// Pointwise (sum_i w_i |T_{t_i} f|^2)^{1/2} with log-trapezoid weights.
Field square_function(const Field& f, const MultiplierSpec& spec, const TGrid& tg);

/// ||square_function(f)||_2 computed on the frequency side:
/// sum_xi |fhat|^2 sum_i w_i m(t_i^{-1} xi', xi_n)^2, which equals the
/// physical-side norm by discrete Plancherel.
double square_function_l2(const Field& f, const MultiplierSpec& spec, const TGrid& tg);

/// Relative change of square_function_l2 between tg and tg.refined().
double square_function_refinement_change(const Field& f, const MultiplierSpec& spec, const TGrid& tg);

/// sum_i w_i m(t_i^{-1} xi', xi_n)^2 at one frequency.
double t_integral(const MultiplierSpec& spec, std::span<const double> xi, const TGrid& tg);

Field L_band(const Field& f, int k);

Field sector_project(const Field& f, const SectorIndex& s);

/// Dyadic-radius composition M_1 o M_{n-1} of axis-group maximal averages.
Field strong_maximal(const Field& f);

}  // namespace conelab
