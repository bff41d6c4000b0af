#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conelab/grid.hpp"
#include "conelab/weights.hpp"

namespace conelab::decompose {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;  // [lo, hi) when true, (lo, hi) otherwise
};

/// Exponent windows for part i in {1..4}: alpha then beta.
struct PartWindows {
  Window alpha;
  Window beta;
};

struct ExponentChoice {
  std::array<WeightParams, 4> weights;
  std::array<PartWindows, 4> windows;
  double target = 0.0;  // n(1 - 2/p) + eps
  std::array<double, 4> slack{};
  bool feasible = true;
  std::string binding;  // first violated constraint when infeasible
};

/// Picks exponents inside each window, shrunk toward the lower edges until
/// alpha_i + beta_i < n(1 - 2/p) + eps.  A slack below 1e-6 counts as infeasible.
ExponentChoice choose_exponents(double p, double eps, int n);

struct FourSplit {
  std::array<Field, 4> parts;
  std::array<Spectrum, 4> spectra;
  std::array<WeightParams, 4> weights;
  double rho = 0.0;
};

/// f1 = f phi(x') phi(x_n), f2 = f (1 - phi(x')) phi(x_n), f3 = f phi(x') (1 - phi(x_n)),
/// f4 = f (1 - phi(x')) (1 - phi(x_n)), with phi the Schwartz caps of radius rho.
FourSplit split_four(const Field& f, double rho, const ExponentChoice* exps = nullptr);

/// Largest |f - (f1 + f2 + f3 + f4)|.
double sum_identity_error(const FourSplit& s, const Field& f);

/// Spectral energy of each part with xi_n outside (lo, hi), over the energy of f.
std::array<double, 4> band_leakage(const FourSplit& s, const Field& f, double lo = 0.1, double hi = 10.0);

/// ||f_i||_{L^2(w_i)} / ||f||_p.
std::array<double, 4> split_norm_report(const FourSplit& s, const Field& f, double p);

struct DilationStudy {
  std::vector<double> scales;
  std::vector<std::array<double, 4>> ratios;
  std::array<double, 4> spread{};  // max/min across scales per part
  double max_spread = 0.0;
  double tau = 0.0;  // Kendall tau of the max ratio against the scale
};

/// Ratios of split_norm_report for f_s(x) = f(s x', x_n) over the scales.
DilationStudy dilation_study(const Grid& grid, const std::function<double(const double*)>& f, double rho, double p,
                             double eps, const std::vector<double>& scales);

struct BlockRange {
  int k_lo = -4, k_hi = 4;
  int l_lo = -2, l_hi = 4;
};

struct OrthoResult {
  double forward = 0.0;  // sum ||f_{k,L}||^2_w / ||f||^2_w
  double dual = 0.0;     // ||sum H||^2_w / sum ||H||^2_w, H = e^{i theta_{k,L}} f_{k,L}
  int blocks = 0;
};

/// Blocks fhat(xi) zeta(2^{-(k+L)} xi') bandbump(2^{-L} xi_n); `exact` swaps the
/// bumps for dyadic indicators, which partition the lattice.
/// The dual blocks carry independent random phases drawn from seed.
OrthoResult ortho_ratio(const Field& f, const WeightParams& w, const BlockRange& r, bool exact = false,
                        std::uint64_t seed = 1);

/// Same blocks measured under several weights.
std::vector<OrthoResult> ortho_ratios(const Field& f, const std::vector<WeightParams>& ws, const BlockRange& r,
                                      bool exact = false, std::uint64_t seed = 1);

/// ||sum H||^2_w / sum ||H||^2_w for supplied blocks.
double dual_ratio(const std::vector<Field>& blocks, const WeightParams& w);

/// Copies the lattice coefficients of s into a grid with the same L and more points.
Spectrum embed_spectrum(const Spectrum& s, const Grid& finer);

}  // namespace conelab::decompose
