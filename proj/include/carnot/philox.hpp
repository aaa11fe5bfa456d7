#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every sample
// owns a stream addressed by (seed, sample index, draw counter), so results
// do not depend on how samples are spread over threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace carnot {

using Philox4x32 = std::array<std::uint32_t, 4>;

inline Philox4x32 philox4x32_10(Philox4x32 ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

/// Standard normals for one sample stream, four per Philox block.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  double next() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

 private:
  static double unit_open(std::uint32_t hi, std::uint32_t lo) {
    // 53-bit uniform in (0, 1).
    const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (lo >> 11);
    return (static_cast<double>(bits & ((std::uint64_t{1} << 53) - 1)) + 0.5) * 0x1p-53;
  }

  void refill() {
    // Two Philox blocks give four 64-bit uniforms, i.e. two Box-Muller pairs.
    const Philox4x32 a = philox4x32_10(
        {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        key_);
    ++counter_;
    const Philox4x32 b = philox4x32_10(
        {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        key_);
    ++counter_;
    const double u[4] = {unit_open(a[0], a[1]), unit_open(a[2], a[3]), unit_open(b[0], b[1]),
                         unit_open(b[2], b[3])};
    for (int k = 0; k < 2; ++k) {
      const double r = std::sqrt(-2.0 * std::log(u[2 * k]));
      const double th = 2.0 * std::numbers::pi * u[2 * k + 1];
      buf_[2 * k] = r * std::cos(th);
      buf_[2 * k + 1] = r * std::sin(th);
    }
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<double, 4> buf_{};
  int pos_ = 4;
};

}  // namespace carnot
