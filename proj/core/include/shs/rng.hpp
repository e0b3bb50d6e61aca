#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace shs::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). Every draw
// is a pure function of (counter, key), so streams are reproducible across
// runs and thread schedules and can be consumed in any order.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u, kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u, kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t a = static_cast<std::uint64_t>(kMulA) * counter[0];
    const std::uint64_t b = static_cast<std::uint64_t>(kMulB) * counter[2];
    const std::array<std::uint32_t, 4> next = {
        static_cast<std::uint32_t>(b >> 32) ^ counter[1] ^ key[0],
        static_cast<std::uint32_t>(b),
        static_cast<std::uint32_t>(a >> 32) ^ counter[3] ^ key[1],
        static_cast<std::uint32_t>(a),
    };
    counter = next;
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return counter;
}

// Stream layout: counter = (index_lo, index_hi, channel, stream), key = seed.
// Channel values with the top bit set are reserved for non-Brownian draws
// (point sampling), keeping them disjoint from noise channels.
constexpr std::uint32_t kSamplingChannelBase = 0x80000000u;

inline std::array<std::uint64_t, 2> draw128(std::uint64_t seed, std::uint32_t stream,
                                            std::uint64_t index, std::uint32_t channel) {
  const auto r = philox4x32({static_cast<std::uint32_t>(index),
                             static_cast<std::uint32_t>(index >> 32), channel, stream},
                            {static_cast<std::uint32_t>(seed),
                             static_cast<std::uint32_t>(seed >> 32)});
  return {(static_cast<std::uint64_t>(r[1]) << 32) | r[0],
          (static_cast<std::uint64_t>(r[3]) << 32) | r[2]};
}

// Uniform on [0,1) from the high 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint32_t stream, std::uint64_t index,
                        std::uint32_t channel) {
  return to_unit(draw128(seed, stream, index, channel)[0]);
}

// Standard normal via Box-Muller (cosine branch); u1 is shifted into (0,1]
// so the log is always defined. One Philox block per draw.
inline double standard_normal(std::uint64_t seed, std::uint32_t stream, std::uint64_t index,
                              std::uint32_t channel) {
  const auto bits = draw128(seed, stream, index, channel);
  const double u1 = (static_cast<double>(bits[0] >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = to_unit(bits[1]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace shs::rng
