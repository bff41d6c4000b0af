#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "conelab/parallel.hpp"
#include "conelab/rng.hpp"

using namespace conelab;

// Known-answer vectors of the Random123 distribution for Philox4x32-10.
TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    differ_c |= x != c.next_u32();
    differ_d |= x != d.next_u32();
  }
  CHECK(differ_c);
  CHECK(differ_d);
}

TEST_CASE("uniform, normal and sphere moments") {
  Rng r(1, 0);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
  double lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    su += u;
    su2 += u * u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.03));

  for (int d : {1, 2, 3, 5}) {
    double mean0 = 0.0, sq0 = 0.0;
    for (int i = 0; i < 20000; ++i) {
      double v[8];
      r.sphere(d, v);
      double s = 0;
      for (int k = 0; k < d; ++k) s += v[k] * v[k];
      CHECK(std::abs(s - 1.0) < 1e-12);
      mean0 += v[0];
      sq0 += v[0] * v[0];
    }
    CHECK(std::abs(mean0 / 20000) < 0.03);
    CHECK(sq0 / 20000 == doctest::Approx(1.0 / d).epsilon(0.05));
  }
}

TEST_CASE("uniform_open never hits zero") {
  Rng r(5, 5);
  for (int i = 0; i < 100000; ++i) CHECK(r.uniform_open() > 0.0);
}

TEST_CASE("parallel_for results do not depend on the thread count") {
  auto run = [](int threads) {
    set_thread_count(threads);
    std::vector<double> v(1000);
    parallel_for(v.size(), [&](std::size_t i) {
      Rng r(9, i);
      v[i] = r.normal();
    });
    return pairwise_sum(v);
  };
  const double a = run(1), b = run(3);
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("parallel_for rethrows") {
  set_thread_count(2);
  CHECK_THROWS(parallel_for(10, [](std::size_t i) {
    if (i == 3) throw std::runtime_error("x");
  }));
  set_thread_count(1);
}
