#include <cmath>
#include <vector>

#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/grid.hpp"
#include "conelab/multipliers.hpp"
#include "conelab/operators.hpp"
#include "conelab/rng.hpp"

using namespace conelab;

namespace {

// a few lattice modes with random amplitudes near the cone
Field mode_mix(const Grid& g, std::uint64_t seed) {
  Rng r(seed, 0);
  Field f(g);
  for (int i = 0; i < 6; ++i) {
    const double h = std::round(g.box_length() * (1.0 + 0.9 * r.uniform())) / g.box_length();
    const double rr = std::round(g.box_length() * h * (0.7 + 0.35 * r.uniform())) / g.box_length();
    const std::vector<double> xi{rr, h};
    f = add(f, synthesize_mode(g, xi, cplx(r.normal(), r.normal())));
  }
  return f;
}

}  // namespace

TEST_CASE("T_t acts on a lattice mode by the dilated symbol") {
  const Grid g(2, 128, 16.0);
  const std::vector<double> xi{1.4375, 1.5};
  const Field f = synthesize_mode(g, xi, cplx(0.5, -1.0));
  for (const auto& spec : {MultiplierSpec::delta_collar(0.125), MultiplierSpec::cone_localized(1.0)})
    for (double t : {1.0, 1.3, 2.0}) {
      const Field out = apply_T(f, spec, t);
      const double m = multipliers::eval_dilated(spec, xi, t);
      CHECK(max_abs_diff(out, scale(f, m)) <= 1e-12);
    }
}

TEST_CASE("t grids") {
  const TGrid tg = TGrid::make(1.0, 2.0, 5);
  CHECK(tg.node(0) == 1.0);
  CHECK(tg.node(4) == doctest::Approx(2.0));
  CHECK(tg.node(2) == doctest::Approx(std::sqrt(2.0)));
  double s = 0;
  for (double w : tg.log_weights()) s += w;
  CHECK(s == doctest::Approx(std::log(2.0)));
  const TGrid fine = tg.refined();
  CHECK(fine.count == 9);
  for (int i = 0; i < tg.count; ++i) CHECK(fine.node(2 * i) == doctest::Approx(tg.node(i)));
  CHECK(TGrid::required_count(1.0, 2.0, 0.125) == int(std::ceil(16 * std::log(2.0) / 0.125)));
  CHECK(TGrid::resolving(1.0, 2.0, 0.125).count >= TGrid::required_count(1.0, 2.0, 0.125));
}

TEST_CASE("square function: spectral norm equals the physical norm") {
  const Grid g(2, 128, 16.0);
  const Field f = mode_mix(g, 3);
  const auto spec = MultiplierSpec::delta_collar(0.125);
  const TGrid tg = TGrid::resolving(1.0, 2.0, 0.125);
  const double phys = l2_norm(square_function(f, spec, tg));
  CHECK(square_function_l2(f, spec, tg) == doctest::Approx(phys).epsilon(1e-10));
  CHECK(square_function_refinement_change(f, spec, tg) < 0.05);
}

TEST_CASE("per-frequency t-integral stays below log(1/(1-delta))") {
  for (double delta : {0.125, 0.03125}) {
    const auto spec = MultiplierSpec::delta_collar(delta);
    const TGrid tg = TGrid::resolving(1.0, 2.0, delta);
    const double bound = std::log(1.0 / (1.0 - delta));
    double worst = 0;
    for (double h = 0.5; h <= 2.0; h += 1.0 / 64)
      for (double r = 0.3 * h; r < 2.2 * h; r += delta / 16) {
        const std::vector<double> xi{r, h};
        worst = std::max(worst, t_integral(spec, xi, tg));
      }
    CHECK(worst > 0.0);
    CHECK(worst <= bound);
  }
}

TEST_CASE("maximal function dominates every T_t") {
  const Grid g(2, 128, 16.0);
  const Field f = mode_mix(g, 5);
  const auto spec = MultiplierSpec::delta_collar(0.125);
  const TGrid tg = TGrid::make(1.0, 2.0, 9);
  const Field m = maximal(f, spec, tg);
  for (double t : tg.nodes()) {
    const Field v = apply_T(f, spec, t);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(v[i]) <= m[i].real() + 1e-12);
  }
}

TEST_CASE("band pieces L_k add back a band-limited field") {
  const Grid g(2, 64, 8.0);
  const std::vector<double> xi{0.5, 1.5};
  const Field f = synthesize_mode(g, xi, 1.0);
  Field sum(g);
  for (int k = -2; k <= 4; ++k) sum = add(sum, L_band(f, k));
  CHECK(max_abs_diff(sum, f) <= 1e-12);
  CHECK(max_abs(L_band(f, 0)) == doctest::Approx(multipliers::eval(MultiplierSpec::band_psi(0), xi)).epsilon(1e-12));
}
