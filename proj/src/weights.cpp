#include "conelab/weights.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"

namespace conelab {

bool WeightParams::a2_admissible(int n) const {
  return alpha > -(n - 1) && alpha < n - 1 && beta > -1.0 && beta < 1.0;
}

bool WeightParams::trace_admissible(int n) const {
  return alpha >= 0.0 && alpha < n - 1 && beta >= 0.0 && beta < 1.0;
}

double weight_value(const WeightParams& w, std::span<const double> x) {
  double v = 1.0;
  if (w.alpha != 0.0 && x.size() > 1) v *= std::pow(geometry::radial_part(x), -w.alpha);
  if (w.beta != 0.0) v *= std::pow(std::abs(x.back()), -w.beta);
  return v;
}

double weighted_norm(const Field& f, const WeightParams& w) {
  const Grid& g = f.grid();
  const bool singular = (w.alpha != 0.0 && g.dim() > 1) || w.beta != 0.0;
  if (singular && !g.half_offset())
    throw GeometryError("weighted_norm: singular weight needs a half-cell offset grid");
  double s = 0.0;
  double x[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::norm(f[i]);
    if (a == 0.0) continue;
    g.point(i, x);
    s += a * weight_value(w, std::span<const double>(x, g.dim()));
  }
  return std::sqrt(s * g.cell_volume());
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw ArgumentError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return max_abs(f);
  double s = 0.0;
  for (const auto& z : f.samples()) s += std::pow(std::abs(z), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

namespace {

// int_d^{d+1} x^p dx / 1
double interval_power_average(double d, double p) {
  if (p == 0.0) return 1.0;
  if (p == -1.0) return std::log((d + 1.0) / d);
  return (std::pow(d + 1.0, p + 1.0) - std::pow(d, p + 1.0)) / (p + 1.0);
}

struct Rule {
  std::vector<double> x, w;  // on [0,1]
};

Rule gl10() {
  using G = boost::math::quadrature::gauss<double, 10>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (double s : {-1.0, 1.0}) {
      if (a[i] == 0.0 && s < 0) continue;
      r.x.push_back(0.5 + 0.5 * s * a[i]);
      r.w.push_back(0.5 * w[i]);
    }
  }
  return r;
}

}  // namespace

double cube_power_average(int k, double d, double p) {
  if (k < 1) throw ArgumentError("cube_power_average: k must be >= 1");
  if (!(d > 0.0)) throw ArgumentError("cube_power_average: d must be positive");
  if (p == 0.0) return 1.0;
  if (k == 1) return interval_power_average(d, p);
  // panel edges graded geometrically toward the corner nearest the origin
  std::vector<double> edges{0.0};
  const int levels = std::max(0, int(std::ceil(std::log2(1.0 / d))) + 1);
  for (int i = levels; i >= 0; --i) edges.push_back(std::ldexp(1.0, -i));
  const Rule rule = gl10();
  std::vector<double> nodes, weights;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      nodes.push_back(d + a + (b - a) * rule.x[q]);
      weights.push_back((b - a) * rule.w[q]);
    }
  }
  const std::size_t m = nodes.size();
  std::vector<std::size_t> idx(k, 0);
  double total = 0.0;
  while (true) {
    double r2 = 0.0, wt = 1.0;
    for (int a = 0; a < k; ++a) {
      r2 += nodes[idx[a]] * nodes[idx[a]];
      wt *= weights[idx[a]];
    }
    total += wt * std::pow(r2, 0.5 * p);
    int a = k - 1;
    while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
    if (a < 0) break;
  }
  return total;
}

std::vector<double> a2_sweep(const WeightParams& w, const RectangleSweep& sweep) {
  if (sweep.dim < 2) throw ArgumentError("a2_sweep: dim must be >= 2");
  std::vector<double> out;
  for (int m = 0; m <= sweep.levels; ++m) {
    const double d = std::ldexp(1.0, -m);
    const int k = sweep.dim - 1;
    const double prime = cube_power_average(k, d, -w.alpha) * cube_power_average(k, d, w.alpha);
    const double last = interval_power_average(d, -w.beta) * interval_power_average(d, w.beta);
    out.push_back(prime * last);
  }
  return out;
}

double a2_product_constant(const WeightParams& w, const RectangleSweep& sweep) {
  const auto v = a2_sweep(w, sweep);
  return *std::max_element(v.begin(), v.end());
}

}  // namespace conelab
