#include "conelab/trace_lab.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"
#include "conelab/parallel.hpp"
#include "conelab/rng.hpp"

namespace conelab::trace {

namespace {

constexpr long kChunk = 1 << 15;

double sphere_area(int k) {  // |S^{k-1}|
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

struct Moments {
  long n = 0;
  double sum = 0.0, sumsq = 0.0;
  double mean() const { return n ? sum / n : 0.0; }
  double var() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sumsq - n * m * m) / (n - 1));
  }
};

// Runs `samples` draws of draw(rng) split into fixed chunks, each chunk on its
// own counter stream, so the total is the same for any thread count.
template <class Draw>
Moments sample_moments(long samples, std::uint64_t seed, std::uint64_t stream, Draw draw) {
  const long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> part(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(seed, (stream << 24) + c);
    const long lo = c * kChunk, hi = std::min<long>(samples, lo + kChunk);
    Moments m;
    for (long i = lo; i < hi; ++i) {
      const double v = draw(rng, i);
      m.sum += v;
      m.sumsq += v * v;
    }
    m.n = hi - lo;
    part[c] = m;
  });
  Moments tot;
  for (const auto& m : part) {
    tot.n += m.n;
    tot.sum += m.sum;
    tot.sumsq += m.sumsq;
  }
  return tot;
}

struct Stratum {
  std::string label;
  double a, b;
};

std::vector<Stratum> make_strata(double delta, double rmax, bool stratified) {
  std::vector<Stratum> s;
  if (!stratified) {
    s.push_back({"all", 0.0, rmax});
    return s;
  }
  s.push_back({"S0", 0.0, delta});
  const int lmax = max_stratum(delta);
  for (int l = 1; l <= lmax; ++l) s.push_back({"S" + std::to_string(l), l * delta, (l + 1) * delta});
  double a = (lmax + 1) * delta;
  for (int i = 0; a < rmax; ++i) {
    const double b = std::min(2.0 * a, rmax);
    s.push_back({"Sinf" + std::to_string(i), a, b});
    a = b;
  }
  return s;
}

double primitive(double z, double beta) {  // d/dz = |z|^{beta-1}
  return std::copysign(std::pow(std::abs(z), beta) / beta, z);
}

Estimate schur_impl(std::span<const double> x, double alpha, double beta, double delta, const McSpec& mc) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || n > kMaxDim) throw ArgumentError("schur_integral: dimension must be in [2, 8]");
  if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("schur_integral: delta must be in (0, 1/4]");
  if (mc.samples < 1000) throw ArgumentError("schur_integral: need at least 1000 samples");
  if (!(geometry::dist_to_cone(x) < delta)) throw ArgumentError("schur_integral: x must lie in the collar");
  const int k = n - 1;
  const double xn = x[k];
  const double rmax = geometry::radial_part(x) + 2.0 + 2.0 * delta;
  const auto strata = make_strata(delta, rmax, mc.stratified);
  const double area = sphere_area(k);

  auto draw_for = [&](const Stratum& s) {
    const double pa = std::pow(s.a, alpha), pb = std::pow(s.b, alpha);
    return [&, pa, pb](Rng& rng, long) {
      const double r = std::pow(pa + rng.uniform() * (pb - pa), 1.0 / alpha);
      double y[kMaxDim];
      if (k == 1) {
        y[0] = x[0] + ((rng.next_u32() & 1u) ? r : -r);
      } else {
        double w[kMaxDim];
        rng.sphere(k, w);
        for (int i = 0; i < k; ++i) y[i] = x[i] + r * w[i];
      }
      double rho = 0.0;
      for (int i = 0; i < k; ++i) rho += y[i] * y[i];
      double lo, hi;
      if (!geometry::collar_height_interval(std::sqrt(rho), delta, lo, hi)) return 0.0;
      return primitive(hi - xn, beta) - primitive(lo - xn, beta);
    };
  };

  const std::size_t ns = strata.size();
  std::vector<double> mass(ns), sd(ns);
  for (std::size_t i = 0; i < ns; ++i)
    mass[i] = area * (std::pow(strata[i].b, alpha) - std::pow(strata[i].a, alpha)) / alpha;

  // Pilot run for a Neyman allocation; pilot draws are not reused.
  const long pilot = std::max<long>(200, mc.samples / (20 * static_cast<long>(ns)));
  const long budget = std::max<long>(0, mc.samples - pilot * static_cast<long>(ns));
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    const auto m = sample_moments(pilot, mc.seed, (mc.stream << 12) + 2 * i, draw_for(strata[i]));
    sd[i] = mass[i] * std::sqrt(m.var());
    weight_sum += sd[i];
  }

  Estimate est;
  double var = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    long m = pilot;
    if (weight_sum > 0.0) m += static_cast<long>(std::floor(budget * sd[i] / weight_sum));
    else m += budget / static_cast<long>(ns);
    const auto mo = sample_moments(m, mc.seed, (mc.stream << 12) + 2 * i + 1, draw_for(strata[i]));
    StratumEstimate se;
    se.label = strata[i].label;
    se.r_lo = strata[i].a;
    se.r_hi = strata[i].b;
    se.samples = m;
    se.value = mass[i] * mo.mean();
    se.stderr_ = mass[i] * std::sqrt(mo.var() / m);
    est.value += se.value;
    var += se.stderr_ * se.stderr_;
    est.strata.push_back(se);
  }
  est.stderr_ = std::sqrt(var);
  return est;
}

void sphere_intervals(double b, double c0, double delta, double alpha, double& acc) {
  // r > 0 with (1-delta)^2 <= r^2 + 2br + c0 < (1+delta)^2
  const double d1 = b * b - c0 + (1.0 + delta) * (1.0 + delta);
  if (d1 <= 0.0) return;
  const double s1 = std::sqrt(d1);
  double lo = std::max(0.0, -b - s1), hi = -b + s1;
  if (hi <= lo) return;
  auto F = [alpha](double r) { return std::pow(r, alpha) / alpha; };
  const double d2 = b * b - c0 + (1.0 - delta) * (1.0 - delta);
  if (d2 > 0.0) {
    const double s2 = std::sqrt(d2);
    const double e0 = -b - s2, e1 = -b + s2;
    // [lo, hi) minus [e0, e1]
    if (e0 > lo) acc += F(std::min(hi, e0)) - F(lo);
    if (e1 < hi) acc += F(hi) - F(std::max(lo, e1));
    return;
  }
  acc += F(hi) - F(lo);
}

}  // namespace

double dist_to_cone(std::span<const double> xi) { return geometry::dist_to_cone(xi); }

int max_stratum(double delta) { return static_cast<int>(std::floor(1.0 / (1000.0 * delta))); }

Estimate schur_integral(std::span<const double> x, const WeightParams& w, double delta, const McSpec& mc) {
  const int n = static_cast<int>(x.size());
  if (!w.trace_admissible(n) || w.alpha <= 0.0 || w.beta <= 0.0)
    throw ArgumentError("schur_integral: need alpha in (0, n-1) and beta in (0, 1)");
  return schur_impl(x, w.alpha, w.beta, delta, mc);
}

Estimate collar_volume(std::span<const double> x, double delta, const McSpec& mc) {
  return schur_impl(x, static_cast<double>(x.size()) - 1.0, 1.0, delta, mc);
}

double cone_area(int n) {
  return std::sqrt(2.0) * sphere_area(n - 1) * (std::pow(2.0, n - 1) - 1.0) / (n - 1);
}

double riesz_constant(int d, double a) {
  if (!(a > 0.0 && a < d)) throw ArgumentError("riesz_constant: need 0 < a < d");
  return std::pow(std::numbers::pi, a - 0.5 * d) * std::tgamma(0.5 * (d - a)) / std::tgamma(0.5 * a);
}

double schur_kernel_constant(int n, const WeightParams& w) {
  return riesz_constant(n - 1, w.alpha) * riesz_constant(1, w.beta);
}

std::vector<std::vector<double>> probe_points(int n, double delta) {
  const double s2 = std::sqrt(0.5);
  std::vector<std::pair<double, double>> rh;
  for (double nu : {0.0, 0.5, -0.5, 0.9, -0.9}) rh.emplace_back(1.5 + nu * delta * s2, 1.5 - nu * delta * s2);
  rh.emplace_back(1.05, 1.05);
  rh.emplace_back(1.95, 1.95);
  rh.emplace_back(1.0 - 0.5 * delta * s2, 1.0 - 0.5 * delta * s2);
  rh.emplace_back(2.0 + 0.5 * delta * s2, 2.0 + 0.5 * delta * s2);
  std::vector<std::vector<double>> pts;
  for (auto [r, h] : rh) {
    std::vector<double> p(n, 0.0);
    p[0] = r;
    p[n - 1] = h;
    pts.push_back(std::move(p));
  }
  return pts;
}

UpperResult trace_constant_upper(int n, double delta, const WeightParams& w, const McSpec& mc) {
  UpperResult out;
  const auto pts = probe_points(n, delta);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    McSpec m = mc;
    m.stream = mc.stream * 64 + i;
    auto e = schur_integral(pts[i], w, delta, m);
    if (e.value > out.value) {
      out.value = e.value;
      out.stderr_ = e.stderr_;
      out.argmax = pts[i];
    }
    out.per_point.push_back(std::move(e));
  }
  return out;
}

LowerResult trace_constant_lower(const Grid& grid, double delta, const WeightParams& w, int random_fields,
                                 std::uint64_t seed) {
  const int n = grid.dim();
  if (n < 2) throw ArgumentError("trace_constant_lower: dimension must be >= 2");
  if (!w.trace_admissible(n)) throw ArgumentError("trace_constant_lower: weight outside the trace window");
  require_collar_resolution(grid, delta, "trace_constant_lower");
  if (grid.nyquist() < 2.0 + delta + grid.freq_spacing())
    throw GeometryError("trace_constant_lower: collar exceeds Nyquist; need N >= " +
                        std::to_string(static_cast<int>(std::ceil(2.0 * grid.box_length() * (2.0 + delta) + 2.0))));
  const std::size_t size = grid.size();

  std::vector<std::size_t> support;
  {
    double xi[kMaxDim];
    for (std::size_t i = 0; i < size; ++i) {
      grid.frequency(i, xi);
      if (geometry::dist_to_cone(std::span<const double>(xi, n)) < delta) support.push_back(i);
    }
  }
  if (support.empty()) throw GeometryError("trace_constant_lower: no lattice point in the collar");

  LowerResult out;
  Rng rng(seed, 0x7ace);
  for (int f = 0; f <= random_fields; ++f) {
    std::vector<cplx> g(size, cplx(0.0));
    const int kind = f == 0 ? -1 : f % 3;
    double c[kMaxDim] = {}, dir[kMaxDim] = {};
    if (kind >= 1) {
      const double s = 1.1 + 0.8 * rng.uniform();
      if (n == 2) dir[0] = (rng.next_u32() & 1u) ? 1.0 : -1.0;
      else rng.sphere(n - 1, dir);
      for (int i = 0; i < n - 1; ++i) c[i] = s * dir[i];
      c[n - 1] = s;
    }
    double xi[kMaxDim];
    for (std::size_t i : support) {
      switch (kind) {
        case -1: g[i] = 1.0; break;
        case 0: g[i] = cplx(rng.normal(), rng.normal()); break;
        case 1: {  // delta-cap around c
          grid.frequency(i, xi);
          double d2 = 0.0;
          for (int j = 0; j < n; ++j) d2 += (xi[j] - c[j]) * (xi[j] - c[j]);
          if (d2 < delta * delta) g[i] = 1.0;
          break;
        }
        case 2: {  // tube around the generator through c
          grid.frequency(i, xi);
          const double s = std::clamp(0.5 * (std::inner_product(xi, xi + n - 1, dir, 0.0) + xi[n - 1]), 1.0, 2.0);
          double d2 = (xi[n - 1] - s) * (xi[n - 1] - s);
          for (int j = 0; j < n - 1; ++j) d2 += (xi[j] - s * dir[j]) * (xi[j] - s * dir[j]);
          if (d2 < delta * delta) g[i] = 1.0;
          break;
        }
      }
    }
    double g2 = 0.0;
    for (std::size_t i : support) g2 += std::norm(g[i]);
    if (g2 == 0.0) {
      out.ratios.push_back(0.0);
      continue;
    }
    g2 *= grid.lattice_measure();
    const Field check = inverse_transform(Spectrum(grid, std::move(g)));
    const double wn = weighted_norm(check, w);
    const double ratio = wn * wn / g2;
    out.ratios.push_back(ratio);
    out.value = std::max(out.value, ratio);
  }
  return out;
}

double interval_trace_sup(double delta, double beta) {
  if (!(delta > 0.0) || !(beta > 0.0 && beta < 1.0))
    throw ArgumentError("interval_trace_sup: need delta > 0 and beta in (0, 1)");
  return 2.0 / beta * std::pow(delta, beta);
}

IntervalCheck interval_trace_check(double delta, double beta, int offsets) {
  IntervalCheck out;
  out.closed_form = interval_trace_sup(delta, beta);
  if (offsets < 3) throw ArgumentError("interval_trace_check: need at least 3 offsets");
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [beta](double u) { return std::pow(u, beta - 1.0); };
  for (int i = 0; i < offsets; ++i) {
    const double off = -delta + 2.0 * delta * i / (offsets - 1);
    double v = 0.0;
    if (off + delta > 0.0) v += ts.integrate(f, 0.0, off + delta);
    if (delta - off > 0.0) v += ts.integrate(f, 0.0, delta - off);
    if (v > out.quadrature_sup) {
      out.quadrature_sup = v;
      out.argmax_offset = off;
    }
  }
  out.rel_error = std::abs(out.quadrature_sup - out.closed_form) / out.closed_form;
  return out;
}

Estimate sphere_schur_integral(std::span<const double> x, double alpha, double delta, const McSpec& mc) {
  const int k = static_cast<int>(x.size());
  if (k < 1 || k > kMaxDim) throw ArgumentError("sphere_schur_integral: dimension must be in [1, 8]");
  if (!(alpha > 0.0 && alpha < k))
    throw ArgumentError("sphere_schur_integral: need alpha in (0, k)");
  if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("sphere_schur_integral: delta must be in (0, 1/4]");
  double c0 = 0.0;
  for (double v : x) c0 += v * v;
  const double area = sphere_area(k);
  Estimate est;
  if (k == 1) {
    double acc = 0.0;
    sphere_intervals(x[0], c0, delta, alpha, acc);
    sphere_intervals(-x[0], c0, delta, alpha, acc);
    est.value = acc;  // |S^0| * mean over the two directions
    return est;
  }
  const long m = mc.samples;
  const auto mo = sample_moments(m, mc.seed, mc.stream, [&](Rng& rng, long i) {
    double w[kMaxDim];
    if (k == 2) {
      const double th = 2.0 * std::numbers::pi * (i + rng.uniform()) / m;
      w[0] = std::cos(th);
      w[1] = std::sin(th);
    } else {
      rng.sphere(k, w);
    }
    double b = 0.0;
    for (int j = 0; j < k; ++j) b += x[j] * w[j];
    double acc = 0.0;
    sphere_intervals(b, c0, delta, alpha, acc);
    return acc;
  });
  est.value = area * mo.mean();
  est.stderr_ = area * std::sqrt(mo.var() / m);
  est.strata.push_back({"all", 0.0, INFINITY, m, est.value, est.stderr_});
  return est;
}

UpperResult sphere_trace_upper(int n, double delta, double alpha, const McSpec& mc) {
  UpperResult out;
  int i = 0;
  for (double rho : {1.0, 1.0 + 0.5 * delta, 1.0 - 0.5 * delta}) {
    std::vector<double> x(n - 1, 0.0);
    x[0] = rho;
    McSpec m = mc;
    m.stream = mc.stream * 8 + i++;
    auto e = sphere_schur_integral(x, alpha, delta, m);
    if (e.value > out.value) {
      out.value = e.value;
      out.stderr_ = e.stderr_;
      out.argmax = x;
    }
    out.per_point.push_back(std::move(e));
  }
  return out;
}

Sweep sphere_trace_sweep(const std::vector<double>& deltas, double alpha, int n, const McSpec& mc) {
  Sweep s;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    McSpec m = mc;
    m.stream = mc.stream * 32 + i;
    const auto u = sphere_trace_upper(n, deltas[i], alpha, m);
    s.points.emplace_back(deltas[i], u.value);
    s.stderrs.push_back(u.stderr_);
  }
  s.fit = select_model(s.points);
  return s;
}

SliceEstimate slice_volume_mc(int n, int l, int k, double delta, double x_n, long samples, std::uint64_t seed,
                              double band_pos) {
  if (n < 3 || n > kMaxDim) throw ArgumentError("slice_volume_mc: dimension must be in [3, 8]");
  if (!(delta > 0.0 && delta <= 0.25)) throw ArgumentError("slice_volume_mc: delta must be in (0, 1/4]");
  if (l < 1 || l > 1.0 / (1000.0 * delta))
    throw ArgumentError("slice_volume_mc: need 1 <= l <= 1/(1000 delta)");
  if (k < 1 || k > l + 5) throw ArgumentError("slice_volume_mc: need 1 <= k <= l + 5");
  if (!(x_n >= 1.0 && x_n <= 2.0)) throw ArgumentError("slice_volume_mc: x_n must be in [1, 2]");
  if (!(band_pos >= 0.0 && band_pos <= 1.0)) throw ArgumentError("slice_volume_mc: band_pos must be in [0, 1]");
  if (samples < 100) throw ArgumentError("slice_volume_mc: need at least 100 samples");

  const int d = n - 1;
  SliceEstimate out;
  out.bound = std::pow(l, 0.5 * (n - 2)) * std::pow(l + 10.0 - k, 0.5 * (n - 4)) * std::pow(delta, n - 1);
  const double r1 = l * delta;
  const double r2 = x_n + (k - 1 + band_pos) * delta;
  const double dc = x_n;  // |x'|
  if (dc >= r1 + r2 + 2.0 * delta || dc <= std::abs(r1 - r2) - 2.0 * delta) {
    out.empty = true;
    return out;
  }
  const double a = std::max(0.0, r1 - delta), b = r1 + delta;
  const double shell = sphere_area(d) * (std::pow(b, d) - std::pow(a, d)) / d;
  const double ad = std::pow(a, d), bd = std::pow(b, d);
  const auto mo = sample_moments(samples, seed, 0x511ce, [&](Rng& rng, long) {
    const double r = std::pow(ad + rng.uniform() * (bd - ad), 1.0 / d);
    double w[kMaxDim];
    rng.sphere(d, w);
    double q = (dc + r * w[0]) * (dc + r * w[0]);
    for (int j = 1; j < d; ++j) q += r * r * w[j] * w[j];
    return std::abs(std::sqrt(q) - r2) < delta ? 1.0 : 0.0;
  });
  const double p = mo.mean();
  out.volume = shell * p;
  out.stderr_ = shell * std::sqrt(p * (1.0 - p) / samples);
  out.empty = mo.sum == 0.0;
  return out;
}

}  // namespace conelab::trace
