#pragma once

#include <cmath>
#include <cstdint>

#include "conelab/grid.hpp"

namespace conelab {

/// Frequency region xi_n in [xin_lo, xin_hi], |xi'|/xi_n in [ratio_lo, ratio_hi].
struct BandRegion {
  double xin_lo = 1.0;
  double xin_hi = 2.0;
  double ratio_lo = 0.0;
  double ratio_hi = INFINITY;

  bool contains(const double* xi, int n) const;
};

/// Independent complex Gaussian coefficients on the lattice points of the region.
Spectrum random_band_spectrum(const Grid& g, const BandRegion& region, std::uint64_t seed, std::uint64_t stream);
Field random_band_field(const Grid& g, const BandRegion& region, std::uint64_t seed, std::uint64_t stream);

/// exp(-|x - c|^2 / (2 sigma^2)) with c = 0.
Field gaussian_field(const Grid& g, double sigma);

}  // namespace conelab
