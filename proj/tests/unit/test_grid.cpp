#include <cmath>
#include <numbers>

#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/grid.hpp"
#include "conelab/rng.hpp"

using namespace conelab;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
  Rng r(seed, 0);
  std::vector<cplx> v(g.size());
  for (auto& z : v) z = {r.normal(), r.normal()};
  return Field(g, std::move(v));
}

// direct O(size^2) sum of the forward convention
std::vector<cplx> brute_dft(const Field& f) {
  const Grid& g = f.grid();
  std::vector<cplx> out(g.size());
  double x[kMaxDim], xi[kMaxDim];
  for (std::size_t m = 0; m < g.size(); ++m) {
    g.frequency(m, xi);
    cplx s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      g.point(k, x);
      double ph = 0.0;
      for (int a = 0; a < g.dim(); ++a) ph += x[a] * xi[a];
      s += f[k] * std::polar(1.0, -2.0 * std::numbers::pi * ph);
    }
    out[m] = s * g.cell_volume();
  }
  return out;
}

}  // namespace

TEST_CASE("forward transform matches the direct sum") {
  for (bool off : {false, true})
    for (int dim : {1, 2, 3}) {
      const Grid g(dim, 8, 3.0, off);
      const Field f = random_field(g, dim + 10 * off);
      const auto ref = brute_dft(f);
      const Spectrum s = forward_transform(f);
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        err = std::max(err, std::abs(s[i] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
      }
      CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("round trip and Plancherel") {
  const Grid g(2, 32, 5.0, true);
  const Field f = random_field(g, 3);
  const Spectrum s = forward_transform(f);
  CHECK(max_abs_diff(inverse_transform(s), f) < 1e-12);
  CHECK(l2_norm(f) == doctest::Approx(l2_norm(s)).epsilon(1e-12));
}

TEST_CASE("a lattice mode transforms to a single coefficient") {
  const Grid g(2, 16, 4.0, true);
  const double xi0[2] = {0.75, -1.25};
  const Field f = synthesize_mode(g, xi0, cplx(2.0, 0.0));
  const Spectrum s = forward_transform(f);
  double xi[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    const bool hit = xi[0] == 0.75 && xi[1] == -1.25;
    // L^n times the amplitude at xi0, zero elsewhere
    CHECK(std::abs(s[i] - (hit ? cplx(2.0 * 16.0, 0.0) : cplx(0.0))) < 1e-10);
  }
  const double off[2] = {0.1, 0.0};
  CHECK_THROWS_AS(synthesize_mode(g, off, 1.0), ArgumentError);
}

TEST_CASE("grid coordinates") {
  const Grid g(1, 8, 4.0);
  CHECK(g.coord(0) == -2.0);
  CHECK(g.coord(4) == 0.0);
  CHECK(g.with_offset(true).coord(0) == -1.75);
  CHECK(g.freq(0) == -1.0);
  CHECK(g.nyquist() == 1.0);
  int k[3] = {1, 2, 3};
  const Grid h(3, 8, 1.0);
  int back[3];
  h.decode(h.encode(k), back);
  CHECK(back[0] == 1);
  CHECK(back[2] == 3);
}

TEST_CASE("bad grids and the memory cap") {
  CHECK_THROWS_AS(Grid(2, 12, 1.0), ArgumentError);
  CHECK_THROWS_AS(Grid(2, 16, -1.0), ArgumentError);
  const auto cap = memory_cap();
  set_memory_cap(1 << 20);
  CHECK_THROWS_AS(Grid(2, 512, 1.0), ResourceError);
  CHECK_NOTHROW(Grid(2, 256, 1.0));
  set_memory_cap(cap);
}

TEST_CASE("Nyquist and collar resolution checks") {
  const Grid g(2, 64, 8.0);  // Nyquist 4
  CHECK_NOTHROW(check_nyquist(MultiplierSpec::delta_collar(0.125), g, 2.0));
  CHECK_THROWS_AS(check_nyquist(MultiplierSpec::delta_collar(0.125), g, 3.0), GeometryError);
  CHECK_THROWS_AS(require_collar_resolution(g, 0.125, "t"), ResolutionError);
  CHECK_NOTHROW(require_collar_resolution(Grid(2, 64, 64.0), 0.125, "t"));
}

TEST_CASE("masks multiply coefficients") {
  const Grid g(2, 64, 16.0);
  const auto spec = MultiplierSpec::cone_localized(1.0);
  const auto mask = eval_mask(spec, g, 1.0);
  const Field f = random_field(g, 8);
  const Spectrum s = forward_transform(f);
  const Spectrum m = apply_mask(s, mask);
  double xi[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.frequency(i, xi);
    CHECK(std::abs(m[i] - s[i] * multipliers::eval(spec, xi)) < 1e-14 * (1 + std::abs(s[i])));
  }
}
