#include "coarse/generators.hpp"

#include <cmath>
#include <vector>

#include "coarse/error.hpp"

namespace coarse::metric {

FiniteMetricSpace path_space(std::size_t n, double edge_length) {
  if (n == 0) throw Error(Errc::BadParams, "path needs at least one vertex");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<PointId>(i), static_cast<PointId>(i + 1), edge_length});
  return FiniteMetricSpace::from_graph(n, edges);
}

FiniteMetricSpace cycle_space(std::size_t n) {
  if (n < 3) throw Error(Errc::BadParams, "cycle needs at least three vertices");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({static_cast<PointId>(i), static_cast<PointId>((i + 1) % n), 1.0});
  return FiniteMetricSpace::from_graph(n, edges);
}

FiniteMetricSpace grid_space(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw Error(Errc::BadParams, "grid dimensions must be positive");
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const auto id = static_cast<PointId>(r * width + c);
      if (c + 1 < width) edges.push_back({id, id + 1, 1.0});
      if (r + 1 < height) edges.push_back({id, static_cast<PointId>(id + width), 1.0});
    }
  return FiniteMetricSpace::from_graph(width * height, edges);
}

FiniteMetricSpace tree_graph_space(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(Errc::BadParams, "tree needs at least one vertex");
  SeededRng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i)
    edges.push_back({static_cast<PointId>(rng.below(i)), static_cast<PointId>(i), 1.0});
  return FiniteMetricSpace::from_graph(n, edges);
}

FiniteMetricSpace random_geometric_space(std::size_t n, double radius, std::uint64_t seed) {
  if (n == 0) throw Error(Errc::BadParams, "random geometric graph needs at least one vertex");
  if (!(radius > 0.0)) throw Error(Errc::BadParams, "connection radius must be positive");
  SeededRng rng(seed);
  const double side = std::sqrt(static_cast<double>(n));
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    p.first = rng.uniform(0.0, side);
    p.second = rng.uniform(0.0, side);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
      if (d <= radius && d > 0.0)
        edges.push_back({static_cast<PointId>(i), static_cast<PointId>(j), d});
    }
  return FiniteMetricSpace::from_graph(n, edges);
}

}  // namespace coarse::metric
