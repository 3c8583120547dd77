#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/metric.hpp"
#include "coarse/verify.hpp"

namespace coarse::covers {

using metric::FiniteMetricSpace;
using metric::PointId;
using metric::PointSubset;
using verify::CoverFamily;

// Ball-carving from the smallest uncovered id (pieces have diameter at most
// target_diam), then greedy coloring of the "cross distance <= R" conflict
// graph. One family per color.
std::vector<CoverFamily> greedy_decomposition(const FiniteMetricSpace& space, double R,
                                              double target_diam);

// Point-finite cover with Lebesgue number >= s from levels of 2s-disjoint
// families. Each member U of level k keeps the points no earlier level
// covered, then grows by the closed s-enlargement. Empty members are dropped.
CoverFamily prop33_transform(const FiniteMetricSpace& space,
                             const std::vector<CoverFamily>& levels, double s);

// Balls around a greedy r-net, one singleton family per net point.
std::vector<CoverFamily> net_ball_levels(const FiniteMetricSpace& space, double r);

struct TreeNode {
  std::size_t id = 0;
  std::size_t level = 1;
  PointSubset members;
  std::vector<std::vector<std::size_t>> families;  // child ids
};

struct DecompositionTree {
  std::size_t m = 1;
  std::vector<std::size_t> arity;  // n_1 .. n_{m-1}
  std::vector<double> radii;       // R_1 .. R_{m-1}
  std::vector<TreeNode> nodes;

  // Throws BadTree on unknown ids.
  const TreeNode& node(std::size_t id) const;
  const TreeNode& root() const;
};

struct TreeReport {
  bool pass = true;
  // 0 structure, 1 root = X, 2 family conditions, 3 bounded leaves.
  std::optional<int> clause;
  std::optional<std::size_t> node;
  std::string message;
  std::optional<std::pair<PointId, PointId>> witness;
  std::optional<double> witness_distance;
  double K = 0.0;  // max leaf diameter
  bool sfdc = false;
};

TreeReport tree_validate(const FiniteMetricSpace& space, const DecompositionTree& tree);

// Cuts the tree at the first level whose nodes all have diameter <= K.
// Throws BadTree when no level qualifies.
DecompositionTree truncate_at_bounded_level(const FiniteMetricSpace& space,
                                            const DecompositionTree& tree, double K);

struct GridShape {
  std::size_t width = 0;
  std::size_t height = 1;
  std::size_t dims() const noexcept { return height > 1 ? 2 : 1; }
};

// Recognizes the unit path metric |i-j| and row-major l1 grids. Throws NotAGrid.
GridShape detect_grid(const FiniteMetricSpace& space);

// Depth-2 brick decomposition of a path (two families of intervals) or a
// 2D grid (three families of shifted bricks). Returns the one-node tree when
// the whole space already has diameter <= block_scale.
DecompositionTree brick_tree(const FiniteMetricSpace& space, const std::vector<double>& radii,
                             double block_scale);

// Nested interval tree on a path: level i+1 cuts each level-i interval into
// blocks of scales[i] points, alternating between two families.
DecompositionTree interval_hierarchy(const FiniteMetricSpace& space,
                                     const std::vector<double>& radii,
                                     const std::vector<std::size_t>& scales);

}  // namespace coarse::covers
