#pragma once

#include <boost/math/quadrature/gauss.hpp>

namespace conelab {

/// Composite 20-point Gauss-Legendre over [a,b] split into `panels` equal pieces.
template <class F>
auto gl_composite(F&& f, double a, double b, int panels) {
  using R = decltype(f(a));
  using Rule = boost::math::quadrature::gauss<double, 20>;
  R total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    total += Rule::integrate(f, lo, lo + h);
  }
  return total;
}

}  // namespace conelab
