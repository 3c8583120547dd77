#pragma once

#include <cstddef>
#include <cstdint>

#include "coarse/metric.hpp"

namespace coarse::metric {

// Portable seeded randomness: SplitMix64 driving explicit conversions, so a
// seed yields the same stream on every standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept { return bound == 0 ? 0 : next() % bound; }

 private:
  std::uint64_t state_;
};

// Unweighted path 0 - 1 - ... - (n-1), scaled by `edge_length`.
FiniteMetricSpace path_space(std::size_t n, double edge_length = 1.0);
FiniteMetricSpace cycle_space(std::size_t n);
// width x height grid graph, row-major ids (id = row * width + col).
FiniteMetricSpace grid_space(std::size_t width, std::size_t height);
// Random recursive tree: vertex i attaches to a uniform earlier vertex.
FiniteMetricSpace tree_graph_space(std::size_t n, std::uint64_t seed);
// n uniform points in [0, sqrt(n)]^2 joined when within `radius`, weighted by
// Euclidean length, shortest-path metric. Throws Disconnected when the
// sample is not connected.
FiniteMetricSpace random_geometric_space(std::size_t n, double radius, std::uint64_t seed);

}  // namespace coarse::metric
