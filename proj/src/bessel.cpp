#include "conelab/bessel.hpp"

#include <cmath>
#include <numbers>

namespace conelab {

namespace {

double j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (double(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

double j0_asymptotic(double x) {
  // a_k = prod_{i<=k} (2i-1)^2 / (k! 8^k); P, Q alternate over even/odd k
  double P = 1.0, Q = 0.0;
  double a = 1.0, prev = INFINITY;
  for (int k = 1; k < 60; ++k) {
    a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (a > prev) break;
    prev = a;
    const int m = k % 4;  // sign pattern of (-1)^{floor(k/2)} with Q leading minus
    if (k % 2 == 0)
      P += (m == 0 ? a : -a);
    else
      Q += (m == 1 ? -a : a);
    if (a < 1e-17) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  return x < 12.0 ? j0_series(x) : j0_asymptotic(x);
}

}  // namespace conelab
