#include "conelab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace conelab::geometry {

double dist_to_segment(double r, double h) {
  const double s = std::clamp(0.5 * (r + h), 1.0, 2.0);
  return std::hypot(r - s, h - s);
}

double radial_part(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double dist_to_cone(std::span<const double> xi) {
  return dist_to_segment(radial_part(xi), xi.back());
}

bool collar_height_interval(double r, double delta, double& lo, double& hi) {
  lo = INFINITY;
  hi = -INFINITY;
  // strip part: |r - h| < sqrt2 delta and 2 - r <= h <= 4 - r
  const double a = std::max(r - std::sqrt(2.0) * delta, 2.0 - r);
  const double b = std::min(r + std::sqrt(2.0) * delta, 4.0 - r);
  if (a < b) {
    lo = a;
    hi = b;
  }
  for (double c : {1.0, 2.0}) {
    const double q = delta * delta - (r - c) * (r - c);
    if (q > 0.0) {
      const double w = std::sqrt(q);
      lo = std::min(lo, c - w);
      hi = std::max(hi, c + w);
    }
  }
  return lo < hi;
}

}  // namespace conelab::geometry
