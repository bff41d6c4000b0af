#pragma once

namespace conelab {

/// J0 by power series for |x| < 12 and the Hankel asymptotic expansion
/// (terms summed down to the smallest one) beyond.
double bessel_j0(double x);

}  // namespace conelab
