#include "conelab/rng.hpp"

#include <cmath>
#include <numbers>

namespace conelab {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kM0) * c[0];
    const std::uint64_t p1 = std::uint64_t(kM1) * c[2];
    const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::array<std::uint32_t, 2> derive_key(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ (stream * 0xD6E8FEB86659FD93ull));
  return {std::uint32_t(h), std::uint32_t(h >> 32)};
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : key_(derive_key(seed, stream)) {}

void Rng::refill() {
  buf_ = philox4x32(ctr_, key_);
  if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
  pos_ = 0;
}

std::uint32_t Rng::next_u32() {
  if (pos_ == 4) refill();
  return buf_[pos_++];
}

double Rng::uniform() {
  const std::uint64_t a = next_u32() >> 5;
  const std::uint64_t b = next_u32() >> 6;
  return (double(a) * 67108864.0 + double(b)) * (1.0 / 9007199254740992.0);
}

double Rng::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double th = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

void Rng::sphere(int d, double* out) {
  if (d == 1) {
    out[0] = uniform() < 0.5 ? -1.0 : 1.0;
    return;
  }
  if (d == 2) {
    const double th = 2.0 * std::numbers::pi * uniform();
    out[0] = std::cos(th);
    out[1] = std::sin(th);
    return;
  }
  double s = 0.0;
  do {
    s = 0.0;
    for (int i = 0; i < d; ++i) {
      out[i] = normal();
      s += out[i] * out[i];
    }
  } while (s < 1e-300);
  s = 1.0 / std::sqrt(s);
  for (int i = 0; i < d; ++i) out[i] *= s;
}

}  // namespace conelab
