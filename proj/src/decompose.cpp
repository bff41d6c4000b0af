#include "conelab/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "conelab/bumps.hpp"
#include "conelab/errors.hpp"
#include "conelab/parallel.hpp"
#include "conelab/rng.hpp"
#include "conelab/scaling_fit.hpp"

namespace conelab::decompose {

namespace {

constexpr double kMinSlack = 1e-6;

double pick(const Window& w, double theta) {
  if (w.hi <= w.lo) return w.lo;
  return w.lo + theta * 0.5 * (w.hi - w.lo);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ExponentChoice choose_exponents(double p, double eps, int n) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw ArgumentError("choose_exponents: p must lie in [2, inf)");
  if (!(eps > 0.0 && eps <= 0.5)) throw ArgumentError("choose_exponents: eps must lie in (0, 1/2]");
  if (n < 2) throw ArgumentError("choose_exponents: n must be >= 2");
  const double b = 1.0 - 2.0 / p;
  const double a = (n - 1) * b;
  const Window zero{0.0, 0.0, true};
  const Window a_low{0.0, a, true}, a_high{a, 1.0 + a, false};
  const Window b_low{0.0, b, true}, b_high{b, 1.0 + b, false};

  ExponentChoice c;
  c.windows = {PartWindows{zero, zero}, PartWindows{a_high, b_low}, PartWindows{a_low, b_high},
               PartWindows{a_high, b_high}};
  c.target = n * b + eps;
  for (int i = 0; i < 4; ++i) {
    const auto& w = c.windows[i];
    if (i == 0) {
      c.weights[0] = {0.0, 0.0};
      c.slack[0] = c.target;
      continue;
    }
    const double base = w.alpha.lo + w.beta.lo;
    const double spread = pick(w.alpha, 1.0) + pick(w.beta, 1.0) - base;
    double theta = spread > 0.0 ? (c.target - 0.5 * eps - base) / spread : 1.0;
    theta = std::min(theta, 1.0);
    const double al = pick(w.alpha, std::max(theta, 0.0)), be = pick(w.beta, std::max(theta, 0.0));
    c.weights[i] = {al, be};
    c.slack[i] = c.target - (al + be);
    const bool open_ok = theta > 0.0 || (w.alpha.lo_closed && w.beta.lo_closed);
    if (c.feasible && (c.slack[i] < kMinSlack || !open_ok)) {
      c.feasible = false;
      c.binding = "alpha_" + std::to_string(i + 1) + " + beta_" + std::to_string(i + 1) + " < n(1-2/p)+eps = " +
                  fmt(c.target) + " leaves slack " + fmt(c.slack[i]) + " above the lower edges " +
                  fmt(w.alpha.lo) + (w.alpha.lo_closed ? "" : "+") + ", " + fmt(w.beta.lo) +
                  (w.beta.lo_closed ? "" : "+");
    }
  }
  return c;
}

FourSplit split_four(const Field& f, double rho, const ExponentChoice* exps) {
  const Grid& g = f.grid();
  const int n = g.dim();
  if (n < 2) throw ArgumentError("split_four: dimension must be >= 2");
  if (!(rho > 0.0 && rho <= 1.0 / 64.0)) throw ArgumentError("split_four: rho must lie in (0, 2^-6]");
  const bumps::SchwartzCap cap_p(rho, n - 1), cap_n(rho, 1);

  const int N = g.points_per_axis();
  std::vector<double> phin(N);
  for (int k = 0; k < N; ++k) phin[k] = cap_n.value(std::abs(g.coord(k)));

  // phi(|x'|) depends on the integer 4|x'|^2/h^2
  const double h = g.spacing();
  std::unordered_map<long long, double> cache;
  std::vector<double> phip(g.size());
  {
    double x[kMaxDim];
    std::vector<long long> keys(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.point(i, x);
      double r2 = 0.0;
      for (int a = 0; a < n - 1; ++a) r2 += x[a] * x[a];
      keys[i] = std::llround(4.0 * r2 / (h * h));
      cache.emplace(keys[i], 0.0);
    }
    std::vector<std::pair<const long long, double>*> slots;
    for (auto& kv : cache) slots.push_back(&kv);
    parallel_for(slots.size(), [&](std::size_t s) {
      slots[s]->second = cap_p.value(0.5 * h * std::sqrt(double(slots[s]->first)));
    });
    for (std::size_t i = 0; i < g.size(); ++i) phip[i] = cache[keys[i]];
  }

  std::array<std::vector<cplx>, 4> v;
  for (auto& a : v) a.resize(g.size());
  int k[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.decode(i, k);
    const double a = phip[i], b = phin[k[n - 1]];
    const cplx z = f[i];
    v[0][i] = z * a * b;
    v[1][i] = z * (1.0 - a) * b;
    v[2][i] = z * a * (1.0 - b);
    v[3][i] = z * (1.0 - a) * (1.0 - b);
  }
  std::array<WeightParams, 4> w{};
  if (exps) w = exps->weights;
  Field p0(g, std::move(v[0])), p1(g, std::move(v[1])), p2(g, std::move(v[2])), p3(g, std::move(v[3]));
  FourSplit s{{p0, p1, p2, p3},
              {forward_transform(p0), forward_transform(p1), forward_transform(p2), forward_transform(p3)},
              w,
              rho};
  return s;
}

double sum_identity_error(const FourSplit& s, const Field& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    const cplx sum = s.parts[0][i] + s.parts[1][i] + s.parts[2][i] + s.parts[3][i];
    m = std::max(m, std::abs(f[i] - sum));
  }
  return m;
}

std::array<double, 4> band_leakage(const FourSplit& s, const Field& f, double lo, double hi) {
  const Spectrum F = forward_transform(f);
  const Grid& g = f.grid();
  double total = 0.0;
  for (const auto& c : F.coeffs()) total += std::norm(c);
  std::array<double, 4> out{};
  double xi[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    const double h = xi[g.dim() - 1];
    if (h > lo && h < hi) continue;
    for (int p = 0; p < 4; ++p) out[p] += std::norm(s.spectra[p][i]);
  }
  for (auto& o : out) o /= total;
  return out;
}

std::array<double, 4> split_norm_report(const FourSplit& s, const Field& f, double p) {
  const double fp = lp_norm(f, p);
  if (!(fp > 0.0)) throw ArgumentError("split_norm_report: f vanishes");
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) r[i] = weighted_norm(s.parts[i], s.weights[i]) / fp;
  return r;
}

DilationStudy dilation_study(const Grid& grid, const std::function<double(const double*)>& f, double rho, double p,
                             double eps, const std::vector<double>& scales) {
  if (scales.size() < 2) throw ArgumentError("dilation_study: need at least two scales");
  const int n = grid.dim();
  const auto exps = choose_exponents(p, eps, n);
  if (!exps.feasible) throw ArgumentError("dilation_study: infeasible exponents: " + exps.binding);
  DilationStudy d;
  d.scales = scales;
  std::vector<double> maxr;
  for (double s : scales) {
    const Field fs = Field::from_function(grid, [&](const double* x) {
      double y[kMaxDim];
      for (int a = 0; a < n - 1; ++a) y[a] = s * x[a];
      y[n - 1] = x[n - 1];
      return cplx(f(y));
    });
    const auto split = split_four(fs, rho, &exps);
    const auto r = split_norm_report(split, fs, p);
    d.ratios.push_back(r);
    maxr.push_back(*std::max_element(r.begin(), r.end()));
  }
  for (int i = 0; i < 4; ++i) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : d.ratios) {
      lo = std::min(lo, r[i]);
      hi = std::max(hi, r[i]);
    }
    d.spread[i] = lo > 0.0 ? hi / lo : INFINITY;
    d.max_spread = std::max(d.max_spread, d.spread[i]);
  }
  d.tau = kendall_tau(scales, maxr);
  return d;
}

std::vector<OrthoResult> ortho_ratios(const Field& f, const std::vector<WeightParams>& ws, const BlockRange& r,
                                      bool exact, std::uint64_t seed) {
  const Grid& g = f.grid();
  const int n = g.dim();
  for (const auto& w : ws)
    if (!w.a2_admissible(n)) throw ArgumentError("ortho_ratio: weight outside the product-A2 window");
  if (r.k_lo > r.k_hi || r.l_lo > r.l_hi) throw ArgumentError("ortho_ratio: empty block range");
  const Spectrum F = forward_transform(f);
  std::vector<double> rad(g.size()), hn(g.size());
  double xi[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    double s = 0.0;
    for (int a = 0; a < n - 1; ++a) s += xi[a] * xi[a];
    rad[i] = std::sqrt(s);
    hn[i] = xi[n - 1];
  }
  const double s2 = std::sqrt(2.0);
  auto mask = [&](std::size_t i, int k, int l) {
    const double u = std::ldexp(rad[i], -(k + l)), v = std::ldexp(hn[i], -l);
    if (exact) return (u >= 1.0 / s2 && u < s2 && v >= 0.5 / s2 && v < 1.0 / s2) ? 1.0 : 0.0;
    return bumps::lp_base(u) * bumps::psi(v);
  };

  const std::size_t nw = ws.size();
  std::vector<OrthoResult> out(nw);
  Rng rng(seed, 0x0a7b0);
  std::vector<cplx> dual_sum(g.size(), cplx(0.0));
  std::vector<double> forward_sum(nw, 0.0);
  int blocks = 0;
  for (int l = r.l_lo; l <= r.l_hi; ++l) {
    for (int k = r.k_lo; k <= r.k_hi; ++k) {
      const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      std::vector<cplx> c(g.size());
      bool any = false;
      for (std::size_t i = 0; i < g.size(); ++i) {
        c[i] = F[i] * mask(i, k, l);
        any = any || c[i] != cplx(0.0);
      }
      if (!any) continue;
      ++blocks;
      const Field piece = inverse_transform(Spectrum(g, std::move(c)));
      for (std::size_t w = 0; w < nw; ++w) {
        const double wn = weighted_norm(piece, ws[w]);
        forward_sum[w] += wn * wn;
      }
      for (std::size_t i = 0; i < g.size(); ++i) dual_sum[i] += phase * piece[i];
    }
  }
  if (blocks == 0) throw ArgumentError("ortho_ratio: no block meets the spectrum of f");
  const Field dual(g, std::move(dual_sum));
  for (std::size_t w = 0; w < nw; ++w) {
    const double fw = weighted_norm(f, ws[w]);
    const double dw = weighted_norm(dual, ws[w]);
    out[w] = {forward_sum[w] / (fw * fw), dw * dw / forward_sum[w], blocks};
  }
  return out;
}

OrthoResult ortho_ratio(const Field& f, const WeightParams& w, const BlockRange& r, bool exact, std::uint64_t seed) {
  return ortho_ratios(f, {w}, r, exact, seed).front();
}

double dual_ratio(const std::vector<Field>& blocks, const WeightParams& w) {
  if (blocks.empty()) throw ArgumentError("dual_ratio: no blocks");
  const Grid& g = blocks.front().grid();
  std::vector<cplx> sum(g.size(), cplx(0.0));
  double denom = 0.0;
  for (const auto& b : blocks) {
    if (!(b.grid() == g)) throw ArgumentError("dual_ratio: grid mismatch");
    const double wn = weighted_norm(b, w);
    denom += wn * wn;
    for (std::size_t i = 0; i < g.size(); ++i) sum[i] += b[i];
  }
  const double s = weighted_norm(Field(g, std::move(sum)), w);
  return s * s / denom;
}

Spectrum embed_spectrum(const Spectrum& s, const Grid& finer) {
  const Grid& g = s.grid();
  if (g.dim() != finer.dim() || g.box_length() != finer.box_length() ||
      finer.points_per_axis() < g.points_per_axis())
    throw ArgumentError("embed_spectrum: target must share L and have at least as many points");
  const int n = g.dim(), shift = (finer.points_per_axis() - g.points_per_axis()) / 2;
  std::vector<cplx> c(finer.size(), cplx(0.0));
  int k[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.decode(i, k);
    for (int a = 0; a < n; ++a) k[a] += shift;
    c[finer.encode(k)] = s[i];
  }
  return Spectrum(finer, std::move(c));
}

}  // namespace conelab::decompose
