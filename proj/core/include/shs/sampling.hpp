#pragma once

#include <cstdint>
#include <vector>

#include "shs/field.hpp"

namespace shs {

// Reproducible phase-space sampling: `count` points drawn uniformly from
// the box [-radius, radius]^{2d}, plus any user-supplied points.
struct SamplingConfig {
  double radius = 2.0;
  int count = 128;
  std::uint64_t seed = 0;
  std::vector<PhasePoint> user_points;
};

std::vector<PhasePoint> sample_points(const SamplingConfig& cfg, int d);

}  // namespace shs
