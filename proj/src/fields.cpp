#include "conelab/fields.hpp"

#include "conelab/errors.hpp"
#include "conelab/rng.hpp"

namespace conelab {

bool BandRegion::contains(const double* xi, int n) const {
  const double h = xi[n - 1];
  if (h < xin_lo || h > xin_hi || h <= 0.0) return false;
  double r = 0.0;
  for (int i = 0; i < n - 1; ++i) r += xi[i] * xi[i];
  const double q = std::sqrt(r) / h;
  return q >= ratio_lo && q <= ratio_hi;
}

Spectrum random_band_spectrum(const Grid& g, const BandRegion& region, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  std::vector<cplx> c(g.size(), cplx(0.0));
  double xi[kMaxDim];
  std::size_t hits = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    if (!region.contains(xi, g.dim())) continue;
    const double re = rng.normal();
    c[i] = cplx(re, rng.normal());
    ++hits;
  }
  if (hits == 0) throw GeometryError("random_band_spectrum: region holds no lattice point");
  return Spectrum(g, std::move(c));
}

Field random_band_field(const Grid& g, const BandRegion& region, std::uint64_t seed, std::uint64_t stream) {
  return inverse_transform(random_band_spectrum(g, region, seed, stream));
}

Field gaussian_field(const Grid& g, double sigma) {
  return Field::from_function(g, [&](const double* x) {
    double r2 = 0.0;
    for (int i = 0; i < g.dim(); ++i) r2 += x[i] * x[i];
    return cplx(std::exp(-0.5 * r2 / (sigma * sigma)));
  });
}

}  // namespace conelab
