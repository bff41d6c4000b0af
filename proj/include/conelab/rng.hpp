#pragma once

#include <array>
#include <cstdint>

namespace conelab {

// Philox4x32-10 (Salmon et al., SC'11).  Counter-based: the stream is a pure
// function of (key, counter), so independent streams need no shared state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Key for stream `stream` under master seed `seed` (splitmix64 of both).
std::array<std::uint32_t, 2> derive_key(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  /// Uniform on (0,1); never returns 0.
  double uniform_open();
  double normal();
  /// Uniform point on the unit sphere S^{d-1}, written to out[0..d).
  void sphere(int d, double* out);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace conelab
