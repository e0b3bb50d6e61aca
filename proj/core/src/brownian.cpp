#include "shs/brownian.hpp"

#include <cmath>
#include <stdexcept>

#include "shs/rng.hpp"

namespace shs {

BrownianPath sample_brownian(int n, double t0, double t1, int steps, std::uint64_t seed,
                             std::uint32_t path_index) {
  if (steps < 1) throw std::invalid_argument("sample_brownian: steps must be >= 1");
  if (n < 0) throw std::invalid_argument("sample_brownian: negative channel count");
  if (!(t1 > t0)) throw std::invalid_argument("sample_brownian: t1 must exceed t0");

  BrownianPath bp;
  bp.t0 = t0;
  bp.t1 = t1;
  bp.steps = steps;
  bp.channels = n;
  bp.seed = seed;
  bp.path_index = path_index;
  bp.increments.resize(static_cast<std::size_t>(steps) * n);

  const double scale = std::sqrt((t1 - t0) / steps);
  for (int k = 0; k < steps; ++k)
    for (int j = 0; j < n; ++j)
      bp.increments[static_cast<std::size_t>(k) * n + j] =
          scale * rng::standard_normal(seed, path_index, static_cast<std::uint64_t>(k),
                                       static_cast<std::uint32_t>(j));
  return bp;
}

BrownianPath coarsen_pairwise(const BrownianPath& fine) {
  if (fine.steps % 2 != 0)
    throw std::invalid_argument("coarsen_pairwise: step count must be even");
  BrownianPath coarse = fine;
  coarse.steps = fine.steps / 2;
  coarse.increments.assign(static_cast<std::size_t>(coarse.steps) * fine.channels, 0.0);
  for (int k = 0; k < coarse.steps; ++k)
    for (int j = 0; j < fine.channels; ++j)
      coarse.increments[static_cast<std::size_t>(k) * fine.channels + j] =
          fine.increment(2 * k, j) + fine.increment(2 * k + 1, j);
  return coarse;
}

}  // namespace shs
