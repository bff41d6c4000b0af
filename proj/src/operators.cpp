#include "conelab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"
#include "conelab/parallel.hpp"

namespace conelab {

TGrid TGrid::make(double t_min, double t_max, int count) {
  if (!(t_min > 0.0 && t_min < t_max)) throw ArgumentError("tgrid: need 0 < t_min < t_max");
  if (count < 2) throw ArgumentError("tgrid: count must be >= 2");
  return TGrid{t_min, t_max, count};
}

int TGrid::required_count(double t_min, double t_max, double scale) {
  if (!(scale > 0.0)) return 2;
  return std::max(2, int(std::ceil(16.0 * std::log(t_max / t_min) / scale)));
}

TGrid TGrid::resolving(double t_min, double t_max, double scale) {
  return make(t_min, t_max, required_count(t_min, t_max, scale));
}

double TGrid::node(int i) const {
  if (i == count - 1) return t_max;
  return t_min * std::exp(std::log(t_max / t_min) * i / (count - 1));
}

std::vector<double> TGrid::nodes() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = node(i);
  return v;
}

std::vector<double> TGrid::log_weights() const {
  const double d = std::log(t_max / t_min) / (count - 1);
  std::vector<double> w(count, d);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

TGrid TGrid::refined() const { return TGrid{t_min, t_max, 2 * count - 1}; }

namespace {

// Nonzero spectral coefficients with their (|xi'|, xi_n).
struct Active {
  std::vector<std::size_t> idx;
  std::vector<double> r, h;
  std::vector<cplx> c;
};

// Coefficients below 1e-15 of the largest are transform round-off of a
// band-limited field and are dropped.
Active active_set(const Spectrum& s) {
  Active a;
  const Grid& g = s.grid();
  double top = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) top = std::max(top, std::abs(s[i]));
  const double floor = 1e-15 * top;
  double xi[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(std::abs(s[i]) > floor)) continue;
    g.frequency(i, xi);
    a.idx.push_back(i);
    a.r.push_back(geometry::radial_part(std::span<const double>(xi, g.dim())));
    a.h.push_back(xi[g.dim() - 1]);
    a.c.push_back(s[i]);
  }
  return a;
}

// Samples of T_t f up to unimodular phases, in work; false when the mask
// vanishes on the whole active set.
bool moduli_on_active(const Grid& g, const Active& a, const MultiplierSpec& spec, double t,
                      std::vector<cplx>& work) {
  std::vector<std::size_t> idx;
  std::vector<cplx> c;
  for (std::size_t q = 0; q < a.idx.size(); ++q) {
    const double m = multipliers::eval_radial(spec, a.r[q] / t, a.h[q]);
    if (m == 0.0) continue;
    idx.push_back(a.idx[q]);
    c.push_back(a.c[q] * m);
  }
  if (idx.empty()) return false;
  inverse_transform_sparse_moduli(g, idx, c, work);
  return true;
}

void require_resolved(const MultiplierSpec& spec, const TGrid& tg) {
  const double scale = spec.collar_scale();
  const int need = TGrid::required_count(tg.t_min, tg.t_max, scale);
  if (scale > 0.0 && tg.count < need)
    throw ResolutionError("square_function: t-grid count " + std::to_string(tg.count) +
                          " under-resolves the collar; need count >= " + std::to_string(need));
}

constexpr int kChunks = 8;

}  // namespace

Field apply_T(const Field& f, const MultiplierSpec& spec, double t) {
  return inverse_transform(apply_mask(forward_transform(f), eval_mask(spec, f.grid(), t)));
}

Field maximal(const Field& f, const MultiplierSpec& spec, const TGrid& tg) {
  const Grid& g = f.grid();
  for (double t : {tg.t_min, tg.t_max}) check_nyquist(spec, g, t);
  const Active a = active_set(forward_transform(f));
  const auto ts = tg.nodes();
  const int chunks = std::min<int>(kChunks, tg.count);
  std::vector<std::vector<double>> part(chunks, std::vector<double>(g.size(), 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<cplx> work;
    for (int i = int(c); i < tg.count; i += chunks) {
      if (!moduli_on_active(g, a, spec, ts[i], work)) continue;
      auto& acc = part[c];
      for (std::size_t p = 0; p < g.size(); ++p) acc[p] = std::max(acc[p], std::abs(work[p]));
    }
  });
  std::vector<cplx> out(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    double m = 0.0;
    for (int c = 0; c < chunks; ++c) m = std::max(m, part[c][p]);
    out[p] = m;
  }
  return Field(g, std::move(out));
}

Field square_function(const Field& f, const MultiplierSpec& spec, const TGrid& tg) {
  require_resolved(spec, tg);
  const Grid& g = f.grid();
  for (double t : {tg.t_min, tg.t_max}) check_nyquist(spec, g, t);
  const Active a = active_set(forward_transform(f));
  const auto ts = tg.nodes();
  const auto w = tg.log_weights();
  const int chunks = std::min<int>(kChunks, tg.count);
  std::vector<std::vector<double>> part(chunks, std::vector<double>(g.size(), 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<cplx> work;
    for (int i = int(c); i < tg.count; i += chunks) {
      if (!moduli_on_active(g, a, spec, ts[i], work)) continue;
      auto& acc = part[c];
      for (std::size_t p = 0; p < g.size(); ++p) acc[p] += w[i] * std::norm(work[p]);
    }
  });
  std::vector<cplx> out(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    double s = 0.0;
    for (int c = 0; c < chunks; ++c) s += part[c][p];
    out[p] = std::sqrt(s);
  }
  return Field(g, std::move(out));
}

namespace {

/// sum_i w_i m(r/t_i, h)^2; the delta collar only sees t in [r/h, r/((1-delta)h)].
double t_sum(const MultiplierSpec& spec, double r, double h, const TGrid& tg, const std::vector<double>& ts,
             const std::vector<double>& w) {
  int lo = 0, hi = tg.count - 1;
  if (spec.family == Family::DeltaCollar && tg.count > 2) {
    if (!(h > 0.0) || !(r > 0.0)) return 0.0;
    const double step = std::log(tg.t_max / tg.t_min) / (tg.count - 1);
    const double a = (std::log(r / h) - std::log(tg.t_min)) / step;
    const double b = (std::log(r / ((1.0 - spec.delta) * h)) - std::log(tg.t_min)) / step;
    lo = std::max(lo, int(std::floor(std::max(a, -1.0))) - 1);
    hi = std::min(hi, int(std::ceil(std::min(b, double(tg.count)))) + 1);
  }
  double s = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double m = multipliers::eval_radial(spec, r / ts[i], h);
    s += w[i] * m * m;
  }
  return s;
}

}  // namespace

double t_integral(const MultiplierSpec& spec, std::span<const double> xi, const TGrid& tg) {
  return t_sum(spec, geometry::radial_part(xi), xi.back(), tg, tg.nodes(), tg.log_weights());
}

double square_function_l2(const Field& f, const MultiplierSpec& spec, const TGrid& tg) {
  require_resolved(spec, tg);
  const Grid& g = f.grid();
  for (double t : {tg.t_min, tg.t_max}) check_nyquist(spec, g, t);
  const Active a = active_set(forward_transform(f));
  const auto ts = tg.nodes();
  const auto w = tg.log_weights();
  std::vector<double> terms(a.idx.size());
  parallel_for(a.idx.size(), [&](std::size_t q) {
    terms[q] = std::norm(a.c[q]) * t_sum(spec, a.r[q], a.h[q], tg, ts, w);
  });
  return std::sqrt(pairwise_sum(terms) * g.lattice_measure());
}

double square_function_refinement_change(const Field& f, const MultiplierSpec& spec, const TGrid& tg) {
  const double a = square_function_l2(f, spec, tg);
  const double b = square_function_l2(f, spec, tg.refined());
  return b > 0.0 ? std::abs(a - b) / b : 0.0;
}

Field L_band(const Field& f, int k) { return apply_T(f, MultiplierSpec::band_psi(k), 1.0); }

Field sector_project(const Field& f, const SectorIndex& s) {
  const Grid& g = f.grid();
  if (!(s.delta > 0.0)) throw ArgumentError("sector_project: delta must be positive");
  require_collar_resolution(g, s.delta, "sector_project");
  const Spectrum in = forward_transform(f);
  std::vector<cplx> out(g.size());
  double xi[kMaxDim];
  const double lo = s.beta * s.delta, hi = (s.beta + 1) * s.delta;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    const double h = xi[g.dim() - 1];
    if (!(h >= 0.5 && h <= 4.0)) continue;
    const double ratio = geometry::radial_part(std::span<const double>(xi, g.dim())) / h;
    if (ratio >= lo && ratio < hi) out[i] = in[i];
  }
  return inverse_transform(Spectrum(g, std::move(out)));
}

namespace {

// Max over dyadic half-widths of periodic centered window averages along `axis`.
void axis_maximal(const Grid& g, std::vector<double>& v, int axis) {
  const int n = g.points_per_axis();
  std::size_t stride = 1;
  for (int a = g.dim() - 1; a > axis; --a) stride *= n;
  const std::size_t lines = g.size() / n;
  std::vector<double> line(n), prefix(3 * n + 1), best(n);
  for (std::size_t l = 0; l < lines; ++l) {
    const std::size_t base = (l / stride) * stride * n + (l % stride);
    for (int k = 0; k < n; ++k) line[k] = v[base + k * stride];
    prefix[0] = 0.0;
    for (int k = 0; k < 3 * n; ++k) prefix[k + 1] = prefix[k] + line[k % n];
    best = line;
    for (int m = 1; m <= n / 2; m *= 2) {
      const int w = std::min(2 * m + 1, n);
      for (int k = 0; k < n; ++k) {
        const int a = k + n - m;
        best[k] = std::max(best[k], (prefix[a + w] - prefix[a]) / w);
      }
    }
    for (int k = 0; k < n; ++k) v[base + k * stride] = best[k];
  }
}

void block_maximal(const Grid& g, std::vector<double>& v) {
  // cube averages over the x' axes: product of per-axis box filters at a common radius
  const int n = g.points_per_axis();
  const int nd = g.dim() - 1;
  if (nd == 0) return;
  std::vector<double> best = v;
  std::vector<double> work(v.size()), prefix(3 * n + 1), line(n);
  for (int m = 1; m <= n / 2; m *= 2) {
    const int w = std::min(2 * m + 1, n);
    work = v;
    for (int axis = 0; axis < nd; ++axis) {
      std::size_t stride = 1;
      for (int a = g.dim() - 1; a > axis; --a) stride *= n;
      const std::size_t lines = g.size() / n;
      for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t base = (l / stride) * stride * n + (l % stride);
        for (int k = 0; k < n; ++k) line[k] = work[base + k * stride];
        prefix[0] = 0.0;
        for (int k = 0; k < 3 * n; ++k) prefix[k + 1] = prefix[k] + line[k % n];
        for (int k = 0; k < n; ++k)
          work[base + k * stride] = (prefix[k + n - m + w] - prefix[k + n - m]) / w;
      }
    }
    for (std::size_t p = 0; p < v.size(); ++p) best[p] = std::max(best[p], work[p]);
  }
  v.swap(best);
}

}  // namespace

Field strong_maximal(const Field& f) {
  const Grid& g = f.grid();
  std::vector<double> v(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) v[p] = std::abs(f[p]);
  block_maximal(g, v);
  axis_maximal(g, v, g.dim() - 1);
  std::vector<cplx> out(v.begin(), v.end());
  return Field(g, std::move(out));
}

}  // namespace conelab
