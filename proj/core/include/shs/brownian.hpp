#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace shs {

// Discretized n-channel Brownian motion on [t0, t1] with N uniform steps:
// increment(k, j) ~ Normal(0, h), h = (t1-t0)/N. Increments are a pure
// function of (seed, path_index, step, channel) via a counter-based
// generator, so paths are bit-reproducible regardless of evaluation order.
struct BrownianPath {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 0;
  int channels = 0;
  std::uint64_t seed = 0;
  std::uint32_t path_index = 0;
  std::vector<double> increments;  // steps x channels, step-major

  double h() const { return steps > 0 ? (t1 - t0) / steps : 0.0; }
  double increment(int step, int channel) const {
    return increments[static_cast<std::size_t>(step) * channels + channel];
  }
  std::span<const double> step_increments(int step) const {
    return {increments.data() + static_cast<std::size_t>(step) * channels,
            static_cast<std::size_t>(channels)};
  }
};

// Draws the path. Gaussian variates come from Philox4x32-10 keyed by seed,
// with (step, channel, path_index) in the counter, through the Box-Muller
// cosine branch (see shs/rng.hpp). N >= 1.
BrownianPath sample_brownian(int n, double t0, double t1, int steps, std::uint64_t seed,
                             std::uint32_t path_index);

// Halves the resolution by summing adjacent increments: the returned path
// is the same Brownian motion observed on the coarser grid. steps must be
// even.
BrownianPath coarsen_pairwise(const BrownianPath& fine);

}  // namespace shs
