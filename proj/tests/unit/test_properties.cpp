// Randomized invariants of the lower layers.
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"

#include "conelab/bumps.hpp"
#include "conelab/errors.hpp"
#include "conelab/geometry.hpp"
#include "conelab/grid.hpp"
#include "conelab/multipliers.hpp"
#include "conelab/operators.hpp"
#include "conelab/rng.hpp"
#include "conelab/scaling_fit.hpp"
#include "conelab/trace_lab.hpp"
#include "conelab/weights.hpp"

using namespace conelab;

namespace {

// random coefficients on lattice points with lo < xi_n < hi and |xi'| / xi_n in (r_lo, r_hi)
Field band_limited(const Grid& g, std::uint64_t seed, double lo, double hi, double r_lo, double r_hi) {
  Rng r(seed, 0);
  std::vector<cplx> c(g.size());
  double xi[kMaxDim];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    const double h = xi[g.dim() - 1];
    const double q = geometry::radial_part(std::span<const double>(xi, g.dim())) / h;
    if (h > lo && h < hi && q > r_lo && q < r_hi) c[i] = cplx(r.normal(), r.normal());
  }
  return inverse_transform(Spectrum(g, std::move(c)));
}

double spectral_l1(const Field& f) {
  const Spectrum s = forward_transform(f);
  double sum = 0;
  for (std::size_t i = 0; i < s.grid().size(); ++i) sum += std::abs(s[i]);
  return sum * s.grid().lattice_measure();
}

// transform round-off leaves tiny coefficients off the intended support
double noise_floor(const Spectrum& s) {
  double m = 0;
  for (std::size_t k = 0; k < s.grid().size(); ++k) m = std::max(m, std::abs(s[k]));
  return 1e-9 * m;
}

}  // namespace

TEST_CASE("grid: unitarity over random fields") {
  const int dims[3][2] = {{1, 64}, {2, 32}, {3, 16}};
  for (const auto& d : dims) {
    const Grid g(d[0], d[1], 3.0, true);
    Rng r(d[0], 1);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<cplx> v(g.size());
      for (auto& z : v) z = {r.normal(), r.normal()};
      const Field f(g, std::move(v));
      const double a = l2_norm(f), b = l2_norm(forward_transform(f));
      worst = std::max(worst, std::abs(a * a - b * b) / (a * a));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("grid: masks vanish outside the declared support") {
  const Grid g(2, 128, 16.0);
  const std::vector<MultiplierSpec> specs = {
      MultiplierSpec::cone_localized(0.5),     MultiplierSpec::angular_dyadic(0, 1.0),
      MultiplierSpec::angular_dyadic(3, 2.0),  MultiplierSpec::angular_dyadic_grad(2, 1.0),
      MultiplierSpec::delta_collar(0.125),     MultiplierSpec::band_psi(0),
      MultiplierSpec::cap_phi()};
  double xi[2];
  for (const auto& s : specs)
    for (double t : {0.5, 1.0, 1.7}) {
      const auto mask = eval_mask(s, g, t);
      long bad = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        g.frequency(i, xi);
        const double d[2] = {xi[0] / t, xi[1]};
        if (!multipliers::in_support(s, d) && mask.values[i] != 0.0) ++bad;
      }
      INFO(family_name(s.family) << " t=" << t);
      CHECK(bad == 0);
    }
}

TEST_CASE("bumps: randomized partitions, ranges and plateaus") {
  using namespace bumps;
  Rng r(21, 0);
  const AngularCollar ac(1e-5);
  double worst_psi = 0, worst_lp = 0, worst_ang = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double t = std::exp(20 * r.uniform() - 10);
    double s = 0;
    for (int k = -40; k <= 40; ++k) s += psi(std::ldexp(t, -k));
    worst_psi = std::max(worst_psi, std::abs(s - 1));

    const double delta = std::exp(std::log(1.0 / 64) + std::log(16.0) * r.uniform());
    const double rad = 1e4 * r.uniform();
    double l = 0;
    for (int j = lp_j0(delta); j <= 40; ++j) l += lp_annulus(rad, j, delta);
    worst_lp = std::max(worst_lp, std::abs(l - 1));

    const double dist = 2 * r.uniform();
    double a = ac.far(dist);
    for (int k = 10; k <= ac.l0(); ++k) a += ac.piece(dist, k);
    worst_ang = std::max(worst_ang, std::abs(a - 1));

    const double x = 3 * r.uniform() - 1;
    for (double v : {smoothstep(x), eta(x), psi(x), collar_profile(x), mu_delta(x, 0.125), lp_base(x)}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    if (x <= 0.25 || x >= 1.0) CHECK(psi(x) == 0.0);
    if (x <= 0.875 || x >= 1.0) CHECK(mu_delta(x, 0.125) == 0.0);
  }
  CHECK(worst_psi <= 1e-14);
  CHECK(worst_lp <= 1e-14);
  CHECK(worst_ang <= 1e-14);
  CHECK(psi(0.3) > 0.0);
  CHECK(mu_delta(0.9, 0.125) > 0.0);
  CHECK(mu_delta(1 - 0.125 / 2, 0.125) == 1.0);
}

TEST_CASE("bumps: collar derivative grows like 1/delta") {
  std::vector<std::pair<double, double>> pts;
  for (int e = 3; e <= 7; ++e) {
    const double delta = std::ldexp(1.0, -e), h = delta * 1e-4;
    double m = 0;
    for (double x = 1 - delta; x < 1; x += h)
      m = std::max(m, std::abs(bumps::mu_delta(x + h, delta) - bumps::mu_delta(x, delta)) / h);
    pts.push_back({delta, m});
  }
  const auto fit = fit_scaling(pts, FitModel::PurePower);
  CHECK(fit.slope >= -1.2);
  CHECK(fit.slope <= -0.8);
}

TEST_CASE("multipliers: full cone symbol is 0-homogeneous") {
  Rng r(22, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<double> xi(n), sx(n);
    for (auto& v : xi) v = 4 * r.uniform() - 2;
    const double s = std::exp(8 * r.uniform() - 4);
    for (int a = 0; a < n; ++a) sx[a] = s * xi[a];
    const auto spec = MultiplierSpec::cone_full(0.5 + 2 * r.uniform());
    const double m = multipliers::eval(spec, xi);
    CHECK(std::abs(multipliers::eval(spec, sx) - m) <= 1e-12);
  }
}

TEST_CASE("multipliers: gradient piece against finite differences at random interior points") {
  Rng r(23, 0);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int g = 1 + trial % 6;
    const double lambda = 0.5 + 2 * r.uniform();
    const double h = 0.55 + 1.4 * r.uniform();
    // 2^g u inside (0.3, 0.95), away from the psi edges
    const double u = std::ldexp(0.3 + 0.65 * r.uniform(), -g);
    const double rad = h * std::sqrt(1 - u);
    const auto spec = MultiplierSpec::angular_dyadic(g, lambda);
    auto m = [&](double x) { return multipliers::eval_radial(spec, x, h); };
    const double e = 1e-4 * h * std::ldexp(1.0, -g);
    const double d = (-m(rad + 2 * e) + 8 * m(rad + e) - 8 * m(rad - e) + m(rad - 2 * e)) / (12 * e);
    const double xi[2] = {rad, h};
    const double ref = std::ldexp(rad * d, -g), got = multipliers::eval_grad_tilde(g, lambda, xi);
    worst = std::max(worst, std::abs(got - ref) / std::max(std::abs(ref), 1e-3 * std::pow(2.0, g * lambda)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("weights: anisotropic homogeneity and refinement") {
  Rng r(24, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const WeightParams w{1.8 * r.uniform() - 0.9, 1.8 * r.uniform() - 0.9};
    const double x[3] = {4 * r.uniform() - 2, 4 * r.uniform() - 2, 4 * r.uniform() - 2};
    const double s = std::exp(4 * r.uniform() - 2);
    const double y[3] = {s * x[0], s * x[1], x[2]};
    CHECK(weight_value(w, y) == doctest::Approx(std::pow(s, -w.alpha) * weight_value(w, x)).epsilon(1e-13));
  }
  auto gauss = [](const double* x) { return cplx(std::exp(-(x[0] * x[0] + 0.5 * x[1] * x[1]))); };
  for (const WeightParams w : {WeightParams{0.5, 0.3}, WeightParams{-0.5, 0.6}, WeightParams{0.2, -0.4}}) {
    const double a = weighted_norm(Field::from_function(Grid(2, 256, 8.0, true), gauss), w);
    const double b = weighted_norm(Field::from_function(Grid(2, 512, 8.0, true), gauss), w);
    INFO("alpha " << w.alpha << " beta " << w.beta);
    CHECK(std::abs(a - b) / b <= 0.02);
  }
}

TEST_CASE("operators: t -> infinity limit of the localized cone") {
  const Grid g(2, 256, 4.0);
  const Field f = band_limited(g, 31, 1.0, 1.75, 0.0, 0.8);
  const auto spec = MultiplierSpec::cone_localized(1.0);
  double R = 0;
  const Spectrum s = forward_transform(f);
  const double cut = noise_floor(s);
  double xi[2];
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(s[i]) > cut) {
      g.frequency(i, xi);
      R = std::max(R, std::abs(xi[0]));
    }
  const Field L = L_band(f, 0);
  for (double t : {2.0, 4.0, 16.0})
    CHECK(max_abs_diff(apply_T(f, spec, t), L) <= R * R / (t * t) * spectral_l1(f) + 1e-12);
}

TEST_CASE("operators: maximal function examples") {
  const Grid g(2, 128, 8.0);
  const std::vector<double> xi{0.5, 1.0};
  const Field f = synthesize_mode(g, xi, 1.0);
  const TGrid tg = TGrid::make(1.0, 3.0, 9);
  const Field m = maximal(f, MultiplierSpec::cone_localized(1.0), tg);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(m[i].real() == doctest::Approx(1 - 0.25 / 9).epsilon(1e-12));

  const std::vector<double> axis{0.0, 1.0};
  const Field c = maximal(synthesize_mode(g, axis, 1.0), MultiplierSpec::cap_phi(), tg);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(c[i].real() == doctest::Approx(1.0).epsilon(1e-12));

  const Field h = band_limited(g, 32, 0.5, 2.0, 0.6, 1.1);
  const auto spec = MultiplierSpec::delta_collar(0.125);
  const Field coarse = maximal(h, spec, tg), fine = maximal(h, spec, tg.refined());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(fine[i].real() >= coarse[i].real());
}

TEST_CASE("operators: square function examples and the Plancherel route") {
  const Grid g(2, 256, 16.0);
  const auto spec = MultiplierSpec::delta_collar(0.125);
  const TGrid tg = TGrid::resolving(0.25, 4.0, 0.125);
  const std::vector<double> axis{0.0, 1.0};
  CHECK(max_abs(square_function(synthesize_mode(g, axis, 1.0), spec, tg)) == 0.0);

  // |xi'| = 1/2, xi_n = 1: the collar is crossed at t in (1/2, 4/7)
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const std::vector<double> xi{0.5, 1.0};
  auto integrand = [&](double lt) {
    const double v = multipliers::eval_dilated(spec, xi, std::exp(lt));
    return v * v;
  };
  const double oracle = GK::integrate(integrand, std::log(0.5), std::log(4.0 / 7.0), 15, 1e-14);
  const Field sq = square_function(synthesize_mode(g, xi, 1.0), spec, tg);
  CHECK(sq[0].real() * sq[0].real() == doctest::Approx(oracle).epsilon(0.01));
  CHECK(oracle <= std::log(1 / (1 - 0.125)));

  const Field f = band_limited(g, 33, 0.5, 2.0, 0.3, 3.5);
  const Spectrum s = forward_transform(f);
  const double cut = noise_floor(s);
  double rhs = 0, fx[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(s[i]) <= cut) continue;
    g.frequency(i, fx);
    const std::vector<double> v{fx[0], fx[1]};
    const double r = std::abs(fx[0]) / fx[1];
    // collar crossing: r / t in (1 - delta, 1)
    auto ig = [&](double lt) {
      const double m = multipliers::eval_dilated(spec, v, std::exp(lt));
      return m * m;
    };
    rhs += std::norm(s[i]) * GK::integrate(ig, std::log(r), std::log(r / (1 - 0.125)), 15, 1e-12);
  }
  rhs *= g.lattice_measure();
  const double lhs = l2_norm(square_function(f, spec, tg));
  CHECK(lhs * lhs == doctest::Approx(rhs).epsilon(0.01));
  // L2 bound of the collar square function
  CHECK(lhs <= std::sqrt(1.2 * 0.125) * l2_norm(f));
}

TEST_CASE("operators: Sobolev product bound for the angular pieces") {
  const Grid g(2, 128, 16.0);
  const Field f = band_limited(g, 34, 0.6, 1.9, 0.5, 1.1);
  const double lambda = 1.0;
  for (int gamma : {1, 2, 4}) {
    const auto piece = MultiplierSpec::angular_dyadic(gamma, lambda);
    const auto grad = MultiplierSpec::angular_dyadic_grad(gamma, lambda);
    const TGrid tg = TGrid::resolving(0.4, 2.0, piece.collar_scale());
    const Field M = maximal(f, piece, tg);
    const Field G = square_function(f, piece, tg);
    const Field Gt = square_function(f, grad, tg);
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double lhs = M[i].real() * M[i].real();
      const double rhs = std::ldexp(1.0, gamma + 1) * G[i].real() * Gt[i].real();
      if (lhs > 0) worst = std::max(worst, (lhs - rhs) / lhs);
    }
    INFO("gamma " << gamma << " worst relative excess " << worst);
    CHECK(worst <= 0.1);
  }
}

TEST_CASE("operators: maximal function dominated by the dyadic pieces") {
  const Grid g(2, 64, 8.0);
  const Field f = band_limited(g, 35, 0.6, 1.9, 0.4, 1.2);
  const double lambda = 1.0;
  const int gmax = 12;
  const TGrid tg = TGrid::make(1.0, 2.0, 17);
  const Field T = maximal(f, MultiplierSpec::cone_localized(lambda), tg);
  std::vector<double> sum(g.size(), 0.0);
  for (int gamma = 0; gamma <= gmax; ++gamma) {
    const Field M = maximal(f, MultiplierSpec::angular_dyadic(gamma, lambda), tg);
    for (std::size_t i = 0; i < g.size(); ++i) sum[i] += std::pow(2.0, -gamma * lambda) * M[i].real();
  }
  // tail: largest unreconstructed symbol value seen by the spectrum over the t-grid
  const Spectrum s = forward_transform(f);
  const double cut = noise_floor(s);
  double sup = 0, xi[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(s[i]) <= cut) continue;
    g.frequency(i, xi);
    for (double t : tg.nodes()) {
      const double d[2] = {xi[0] / t, xi[1]};
      sup = std::max(sup, multipliers::reconstruct_residual(lambda, gmax, d));
    }
  }
  const double tail = sup * spectral_l1(f);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(T[i].real() <= sum[i] + tail + 1e-12);
}

TEST_CASE("operators: rescaling law of the dyadic square functions") {
  // G_k of f(2^k x', x_n) is G_0 f at (2^k x', x_n); the weighted ratio is k-free
  const double delta = 0.25;
  const Grid g(2, 1024, 32.0, true);
  const WeightParams w{0.5, 0.3};
  const auto spec = MultiplierSpec::delta_collar(delta);
  Rng r(36, 0);
  std::vector<std::array<double, 2>> family;
  for (int i = 0; i < 2; ++i) family.push_back({1.3 + 0.3 * r.uniform(), 1.0 + 0.4 * r.uniform()});
  std::vector<double> best;
  for (int k = -2; k <= 2; ++k) {
    const TGrid tg = TGrid::resolving(std::ldexp(1.0, k), std::ldexp(1.0, k + 1), delta);
    double m = 0;
    for (const auto& [a, b] : family) {
      const double s = std::ldexp(1.0, k);
      const Field f = Field::from_function(g, [&](const double* x) {
        const double y = s * x[0];
        return std::exp(-0.5 * y * y - x[1] * x[1] / 8.0) * std::polar(1.0, 2 * std::numbers::pi * (a * b * y + b * x[1]));
      });
      m = std::max(m, weighted_norm(square_function(f, spec, tg), w) / weighted_norm(f, w));
    }
    best.push_back(m);
  }
  for (double v : best) CHECK(v == doctest::Approx(best[2]).epsilon(0.05));
}

TEST_CASE("operators: L_band and sector projection examples") {
  const Grid g(2, 128, 32.0);
  const std::vector<double> one{0.25, 1.0}, neg{0.25, -1.0};
  const Field m = synthesize_mode(g, one, 1.0);
  CHECK(max_abs_diff(L_band(m, 0), m) <= 1e-12);
  for (int k = -3; k <= 3; ++k) CHECK(max_abs(L_band(synthesize_mode(g, neg, 1.0), k)) <= 1e-14);
  const Field b = band_limited(g, 37, 1.0, 2.0, 0.0, 1.5);
  Field sum(g);
  for (int k = -4; k <= 4; ++k) sum = add(sum, L_band(b, k));
  CHECK(l2_norm(add(sum, scale(b, -1.0))) <= 1e-12 * l2_norm(b));

  const double delta = 0.25;
  const Field f = band_limited(g, 38, 0.0, 5.0, 0.0, 4.0);
  double parts = 0;
  Field uni(g);
  std::vector<Field> P;
  for (int beta = 0; beta < 8; ++beta) {
    P.push_back(sector_project(f, {beta, delta}));
    parts += std::pow(l2_norm(P.back()), 2);
    uni = add(uni, P.back());
  }
  CHECK(max_abs_diff(sector_project(P[3], {3, delta}), P[3]) <= 1e-12 * max_abs(f));
  CHECK(parts == doctest::Approx(std::pow(l2_norm(uni), 2)).epsilon(1e-12));
  cplx ip = 0;
  for (std::size_t i = 0; i < g.size(); ++i) ip += P[1][i] * std::conj(P[4][i]);
  CHECK(std::abs(ip) * g.cell_volume() <= 1e-12 * l2_norm(f) * l2_norm(f));
  CHECK_THROWS_AS(sector_project(f, {0, 0.01}), ResolutionError);
}

TEST_CASE("operators: strong maximal function") {
  const Grid g(2, 256, 64.0, true);
  const Field c = Field::from_function(g, [](const double*) { return cplx(2.5); });
  CHECK(max_abs_diff(strong_maximal(c), c) <= 1e-12);
  const Field box = Field::from_function(g, [](const double* x) {
    return cplx(std::abs(x[0]) < 0.5 && std::abs(x[1]) < 0.5 ? 1.0 : 0.0);
  });
  const Field M = strong_maximal(box);
  double x[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    CHECK(M[i].real() >= std::abs(box[i]) - 1e-15);
    if (std::abs(x[0]) < 0.5 && std::abs(x[1]) < 0.5) CHECK(M[i].real() == doctest::Approx(1.0));
    if (std::abs(x[0]) < 0.5 && (std::abs(x[1] - 8.125) < 1e-9 || std::abs(x[1] - 16.125) < 1e-9)) {
      const double d = x[1];
      CHECK(M[i].real() * d >= 0.2);
      CHECK(M[i].real() * d <= 1.0);
    }
  }
}

TEST_CASE("trace: alpha near zero follows the interval law") {
  const double beta = 0.5;
  std::vector<std::pair<double, double>> pts;
  for (int e = 3; e <= 7; ++e) {
    const double delta = std::ldexp(1.0, -e);
    pts.push_back({delta, trace::trace_constant_upper(3, delta, {0.01, beta}, {20000, 7, 0, true}).value});
  }
  const auto fit = fit_scaling(pts, FitModel::PurePower);
  INFO("slope " << fit.slope);
  CHECK(fit.slope == doctest::Approx(0.01 + beta).epsilon(0.15 / 0.51));
}
