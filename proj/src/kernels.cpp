#include "conelab/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "conelab/bessel.hpp"
#include "conelab/bumps.hpp"
#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"
#include "conelab/parallel.hpp"
#include "conelab/rng.hpp"

namespace conelab::kernels {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Panel edges on [a, b]: `panels` equal pieces, with the first and last one
// split geometrically toward the ends (the bumps are flat but not analytic there).
std::vector<double> graded_edges(double a, double b, int panels, int grading) {
  std::vector<double> e;
  const double h = (b - a) / panels;
  e.push_back(a);
  for (int g = grading; g >= 1; --g) e.push_back(a + std::ldexp(h, -g));
  for (int p = 1; p < panels; ++p) e.push_back(a + p * h);
  for (int g = 1; g <= grading; ++g) e.push_back(b - std::ldexp(h, -g));
  e.push_back(b);
  return e;
}

template <class F>
auto integrate_edges(F&& f, const std::vector<double>& e) {
  using R = decltype(f(e[0]));
  R total{};
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t p = 0; p + 1 < e.size(); ++p) {
    const double c = 0.5 * (e[p] + e[p + 1]), h = 0.5 * (e[p + 1] - e[p]);
    R s{};
    for (std::size_t k = 0; k < x.size(); ++k)
      s += x[k] == 0.0 ? w[k] * f(c) : w[k] * (f(c - h * x[k]) + f(c + h * x[k]));
    total += h * s;
  }
  return total;
}

double norm_of(const double* v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

Field kernel_Kdelta(const Grid& grid, double delta, double t) {
  require_collar_resolution(grid, delta, "kernel_Kdelta");
  const auto mask = eval_mask(MultiplierSpec::delta_collar(delta), grid, t);
  std::vector<cplx> c(mask.values.begin(), mask.values.end());
  return inverse_transform(Spectrum(grid, std::move(c)));
}

int max_piece_scale(const Grid& grid) {
  int j = 0;
  while (std::ldexp(1.0, j + 2) <= 0.5 * grid.box_length()) ++j;
  return j;
}

KernelPiece kernel_piece(const Grid& grid, int j, double delta, std::optional<int> l, double t) {
  const int j0 = bumps::lp_j0(delta);
  if (j < j0) throw ArgumentError("kernel_piece: j must be >= j0 = " + std::to_string(j0));
  if (std::ldexp(1.0, j + 1) > 0.5 * grid.box_length())
    throw GeometryError("kernel_piece: 2^(j+1) = " + std::to_string(std::ldexp(1.0, j + 1)) +
                        " exceeds L/2; need L >= " + std::to_string(std::ldexp(1.0, j + 2)));
  if (!(t >= 1.0)) throw ArgumentError("kernel_piece: t must be >= 1");
  bumps::AngularCollar ac(delta);
  if (l && *l != bumps::AngularCollar::kFar && !ac.has_piece(*l))
    throw ArgumentError("kernel_piece: l outside [10, l0]");

  const Field kd = kernel_Kdelta(grid, delta, t);
  const int n = grid.dim();
  std::vector<cplx> v(grid.size());
  double x[kMaxDim];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    for (int a = 0; a < n - 1; ++a) x[a] *= t;
    v[i] = kd[i] * bumps::lp_annulus(norm_of(x, n), j, delta);
  }
  Field phys(grid, std::move(v));
  Spectrum spec = forward_transform(phys);
  if (l) {
    auto c = spec.release();
    double xi[kMaxDim];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.frequency(i, xi);
      c[i] *= ac.piece(geometry::dist_to_cone(std::span<const double>(xi, n)), *l);
    }
    spec = Spectrum(grid, std::move(c));
    phys = inverse_transform(spec);
  }
  return KernelPiece{j, l, delta, t, std::move(phys), std::move(spec)};
}

ShellSup offcone_spectrum_sup(const KernelPiece& piece, int l_probe) {
  const Grid& g = piece.spectrum.grid();
  const int n = g.dim();
  double lo = 0.0, hi = INFINITY;
  if (l_probe == bumps::AngularCollar::kFar) {
    lo = 0.5;
  } else if (l_probe != kWholeLattice) {
    lo = std::ldexp(piece.delta, l_probe);
    hi = 2.0 * lo;
  }
  ShellSup s;
  double xi[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    const double d = geometry::dist_to_cone(std::span<const double>(xi, n));
    if (d < lo || d >= hi) continue;
    s.value = std::max(s.value, std::abs(piece.spectrum[i]));
    ++s.points;
  }
  s.empty = s.points == 0;
  return s;
}

double psi_hat_l1(const Grid& grid, int j, double delta) {
  const Field psi = Field::from_function(grid, [&](const double* x) {
    return cplx(bumps::lp_annulus(norm_of(x, grid.dim()), j, delta));
  });
  const Spectrum s = forward_transform(psi);
  double acc = 0.0;
  for (const auto& c : s.coeffs()) acc += std::abs(c);
  return acc * grid.lattice_measure();
}

KlambdaQuadrature klambda_required(double rho, double x_n) {
  // oscillations over xi_n in [1/4, 1] and over r in [0, xi_n]
  const double outer = 0.75 * (std::abs(x_n) + std::abs(rho)) + 1.0;
  const double inner = std::abs(rho) + 1.0;
  return {8 * static_cast<int>(std::ceil(outer)), 8 * static_cast<int>(std::ceil(inner))};
}

cplx kernel_Klambda(double rho, double x_n, double lambda, KlambdaQuadrature q) {
  if (!(lambda >= 0.0)) throw ArgumentError("kernel_Klambda: lambda must be >= 0");
  if (!(rho >= 0.0) || !std::isfinite(x_n)) throw ArgumentError("kernel_Klambda: need rho >= 0 and finite x_n");
  const auto need = klambda_required(rho, x_n);
  if (q.outer_points == 0) q.outer_points = std::max(need.outer_points, 120);
  if (q.inner_points == 0) q.inner_points = std::max(need.inner_points, 40);
  if (q.outer_points < need.outer_points || q.inner_points < need.inner_points)
    throw ResolutionError("kernel_Klambda: need at least " + std::to_string(need.outer_points) + " outer and " +
                          std::to_string(need.inner_points) + " inner nodes");

  // one 20-node panel per 8 required nodes: the inner value is small against the
  // integrand once rho is large, so each oscillation gets a full panel
  const int inner_panels = std::max(2, (q.inner_points + 7) / 8);
  const auto inner_edges = graded_edges(0.0, 1.0, inner_panels, lambda == std::floor(lambda) ? 0 : 6);
  auto inner = [&](double h) {  // int_0^h (1 - r^2/h^2)^lambda J0(2 pi r rho) r dr
    const double a = kTwoPi * rho * h;
    const double s = integrate_edges(
        [&](double u) { return std::pow(std::max(0.0, 1.0 - u * u), lambda) * bessel_j0(a * u) * u; }, inner_edges);
    return h * h * s;
  };
  // psi(xi_n) is smooth on [1/4, 1/2] and [1/2, 1] separately
  const int per = std::max(2, (q.outer_points + 15) / 16);
  cplx total = 0.0;
  for (auto [a, b] : {std::pair{0.25, 0.5}, std::pair{0.5, 1.0}}) {
    const auto e = graded_edges(a, b, per, 6);
    total += integrate_edges(
        [&](double h) {
          const double ps = bumps::psi(h);
          if (ps == 0.0) return cplx(0.0);
          return ps * inner(h) * std::polar(1.0, kTwoPi * x_n * h);
        },
        e);
  }
  return kTwoPi * total;
}

DecayProfile klambda_decay(double lambda, double angle, const std::vector<double>& radii) {
  DecayProfile d;
  d.angle = angle;
  d.radii = radii;
  d.values.assign(radii.size(), 0.0);
  parallel_for(radii.size(), [&](std::size_t i) {
    d.values[i] = std::abs(kernel_Klambda(radii[i] * std::sin(angle), radii[i] * std::cos(angle), lambda));
  });
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (d.values[i] <= 0.0) continue;
    lx.push_back(std::log(radii[i]));
    ly.push_back(std::log(d.values[i]));
  }
  if (lx.size() < 2) throw ArgumentError("klambda_decay: need two nonzero samples");
  const auto f = fit_line(lx, ly);
  d.exponent = -f.slope;
  d.r2 = f.r2;
  return d;
}

void CubeLattice::cube_of(const double* x, int* i) const {
  for (int a = 0; a < dim; ++a) {
    long k = std::lround(x[a] / side);
    const long m = per_axis;
    k = ((k + m / 2) % m + m) % m - m / 2;
    i[a] = static_cast<int>(k);
  }
}

Region CubeLattice::classify(const int* i) const {
  double r = 0.0;
  for (int a = 0; a < dim - 1; ++a) r += double(i[a]) * i[a];
  const bool far_p = std::sqrt(r) >= 10.0 * dim;
  const bool far_n = std::abs(i[dim - 1]) >= 10 * dim;
  if (far_p) return far_n ? Region::E1 : Region::E2;
  return far_n ? Region::E4 : Region::E3;
}

CubeLattice region_partition(const Grid& grid, int j, double c1) {
  if (!(c1 > 0.0)) throw ArgumentError("region_partition: c1 must be positive");
  const double L = grid.box_length();
  const double unit = std::ldexp(1.0, j);
  long m = std::max(1L, std::lround(L / (c1 * unit)));
  const double adj = L / (m * unit);
  if (adj < 0.5 || adj > 2.0)
    throw GeometryError("region_partition: no c1 in [1/2, 2] makes c1 2^j divide L");
  CubeLattice c;
  c.dim = grid.dim();
  c.j = j;
  c.c1 = adj;
  c.side = adj * unit;
  c.per_axis = static_cast<int>(m);
  long total = 1;
  for (int a = 0; a < c.dim; ++a) total *= m;
  int idx[kMaxDim];
  for (long q = 0; q < total; ++q) {
    long r = q;
    for (int a = c.dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % m - m / 2);
      r /= m;
    }
    ++c.counts[static_cast<int>(c.classify(idx)) - 1];
  }
  return c;
}

CubeRatio cube_square_ratio(const CubeProblem& p, const WeightParams& w) {
  const int n = p.dim;
  if (int(p.cube.size()) != n) throw ArgumentError("cube_square_ratio: cube index has the wrong dimension");
  if (p.fields < 1) throw ArgumentError("cube_square_ratio: need at least one field");
  const int j = p.j ? p.j : bumps::lp_j0(p.delta);
  const Grid g = make_grid(n, p.points, p.window, true);
  const double side = std::ldexp(1.0, j);
  if (side + std::ldexp(1.0, j + 2) > p.window)
    throw GeometryError("cube_square_ratio: window must exceed the cube plus the kernel support, need >= " +
                        std::to_string(side + std::ldexp(1.0, j + 2)));

  CubeRatio out;
  out.side = side;
  CubeLattice cl;
  cl.dim = n;
  cl.side = side;
  out.region = cl.classify(p.cube.data());

  const std::size_t size = g.size();
  std::vector<double> wv(size);
  std::vector<char> in_cube(size);
  double x[kMaxDim], X[kMaxDim];
  out.w_min = INFINITY;
  for (std::size_t i = 0; i < size; ++i) {
    g.point(i, x);
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      X[a] = side * p.cube[a] + x[a];
      inside = inside && std::abs(x[a]) < 0.5 * side;
    }
    wv[i] = weight_value(w, std::span<const double>(X, n));
    in_cube[i] = inside;
    out.w_min = std::min(out.w_min, wv[i]);
    out.w_max = std::max(out.w_max, wv[i]);
  }

  std::vector<Spectrum> fh;
  std::vector<double> fnorm;
  for (int f = 0; f < p.fields; ++f) {
    Rng rng(p.seed, 0xc0be0000ULL + f);
    std::vector<cplx> v(size, cplx(0.0));
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      if (!in_cube[i]) continue;
      const double re = rng.normal();
      v[i] = cplx(re, rng.normal());
      s += std::norm(v[i]) * wv[i];
    }
    fnorm.push_back(std::sqrt(s * g.cell_volume()));
    fh.push_back(forward_transform(Field(g, std::move(v))));
  }

  const TGrid tg = TGrid::resolving(1.0, 2.0, p.delta);
  const auto ts = tg.nodes();
  const auto lw = tg.log_weights();
  std::vector<std::vector<double>> acc(p.fields, std::vector<double>(size, 0.0));
  for (int ti = 0; ti < tg.count; ++ti) {
    const KernelPiece k = kernel_piece(g, j, p.delta, std::nullopt, ts[ti]);
    parallel_for(p.fields, [&](std::size_t f) {
      std::vector<cplx> c(size);
      for (std::size_t i = 0; i < size; ++i) c[i] = fh[f][i] * k.spectrum[i];
      const Field conv = inverse_transform(Spectrum(g, std::move(c)));
      for (std::size_t i = 0; i < size; ++i) acc[f][i] += lw[ti] * std::norm(conv[i]);
    });
  }
  for (int f = 0; f < p.fields; ++f) {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) s += acc[f][i] * wv[i];
    out.ratios.push_back(std::sqrt(s * g.cell_volume()) / fnorm[f]);
  }
  return out;
}

G0Sample g0_weighted_ratios(const Grid& grid, double delta, const std::vector<WeightParams>& weights,
                            const std::vector<Field>& fields, const TGrid& tg) {
  G0Sample out;
  out.ratios.assign(weights.size(), {});
  const auto spec = MultiplierSpec::delta_collar(delta);
  for (const auto& f : fields) {
    if (!(f.grid() == grid)) throw ArgumentError("g0_weighted_ratios: field grid mismatch");
    const Field G = square_function(f, spec, tg);
    for (std::size_t w = 0; w < weights.size(); ++w)
      out.ratios[w].push_back(weighted_norm(G, weights[w]) / weighted_norm(f, weights[w]));
  }
  return out;
}

}  // namespace conelab::kernels
