#include "shs/sampling.hpp"

#include "shs/rng.hpp"

namespace shs {

std::vector<PhasePoint> sample_points(const SamplingConfig& cfg, int d) {
  std::vector<PhasePoint> points;
  points.reserve(cfg.count + cfg.user_points.size());
  for (int k = 0; k < cfg.count; ++k) {
    PhasePoint z = PhasePoint::zero(d);
    for (int c = 0; c < 2 * d; ++c) {
      const double u = rng::uniform01(cfg.seed, 0, static_cast<std::uint64_t>(k),
                                      rng::kSamplingChannelBase | static_cast<std::uint32_t>(c));
      const double x = cfg.radius * (2.0 * u - 1.0);
      (c < d ? z.q[c] : z.p[c - d]) = x;
    }
    points.push_back(std::move(z));
  }
  points.insert(points.end(), cfg.user_points.begin(), cfg.user_points.end());
  return points;
}

}  // namespace shs
