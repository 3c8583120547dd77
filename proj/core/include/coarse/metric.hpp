#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace coarse::metric {

using PointId = std::uint32_t;

// Absolute/relative slack allowed when checking the triangle inequality.
inline constexpr double kTriangleTolerance = 1e-9;
// Spaces up to this size keep a dense distance table.
inline constexpr std::size_t kDenseTableLimit = 4096;
// Triangle validation is exhaustive up to this size, sampled above it.
inline constexpr std::size_t kExhaustiveTriangleLimit = 2000;

enum class Provenance { matrix, points, graph };

struct Edge {
  PointId u = 0;
  PointId v = 0;
  double weight = 1.0;
};

// Sorted, duplicate-free set of point ids.
class PointSubset {
 public:
  PointSubset() = default;
  // Sorts `ids`; throws BadPoint on duplicates.
  explicit PointSubset(std::vector<PointId> ids);
  PointSubset(std::initializer_list<PointId> ids)
      : PointSubset(std::vector<PointId>(ids)) {}

  static PointSubset all(std::size_t n);
  // Inclusive range [first, last].
  static PointSubset interval(PointId first, PointId last);
  // Caller guarantees `ids` is strictly increasing.
  static PointSubset from_sorted(std::vector<PointId> ids);

  std::span<const PointId> ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(PointId x) const noexcept;
  PointId front() const { return ids_.front(); }
  PointId back() const { return ids_.back(); }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  // Membership as a dense byte mask over [0, universe).
  std::vector<char> mask(std::size_t universe) const;
  bool is_subset_of(const PointSubset& other) const;

  friend bool operator==(const PointSubset&, const PointSubset&) = default;

 private:
  std::vector<PointId> ids_;
};

PointSubset set_union(const PointSubset& a, const PointSubset& b);
PointSubset set_intersection(const PointSubset& a, const PointSubset& b);
PointSubset set_difference(const PointSubset& a, const PointSubset& b);
PointSubset from_mask(const std::vector<char>& mask);

// Total map X -> A that fixes A; target[x] realizes dist(x, A).
struct Retraction {
  PointSubset image;
  std::vector<PointId> target;
  std::vector<double> distance;

  PointId operator()(PointId x) const { return target[x]; }
};

struct Neighbor {
  PointId id;
  double distance;
};

// Immutable finite metric space. Copies share the underlying storage.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace from_matrix(const std::vector<std::vector<double>>& rows);
  static FiniteMetricSpace from_graph(std::size_t n, std::span<const Edge> edges);
  // p may be +infinity for the max norm.
  static FiniteMetricSpace from_points(std::vector<std::vector<double>> coords, double p);

  std::size_t size() const noexcept;
  Provenance provenance() const noexcept;
  bool has_table() const noexcept;

  double distance(PointId x, PointId y) const;
  // Points y with d(x, y) < radius, ascending by id. Distances are the same
  // values distance(min(x,y), max(x,y)) would return for y > x.
  std::vector<Neighbor> ball(PointId x, double radius) const;
  // Single-source distances from x.
  std::vector<double> row(PointId x) const;

  // Provenance payloads, for serialization.
  std::span<const Edge> edges() const;
  const std::vector<std::vector<double>>& coords() const;
  double norm_p() const;

  bool same_storage(const FiniteMetricSpace& other) const noexcept {
    return data_ == other.data_;
  }

  struct Data;

 private:
  explicit FiniteMetricSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

// Throws BadPoint unless every member is a valid id of `space`.
void check_subset(const FiniteMetricSpace& space, const PointSubset& subset);

double dist_to_set(const FiniteMetricSpace& space, PointId x, const PointSubset& set);
// Open ball {x : dist(x, A) < r}.
PointSubset set_ball(const FiniteMetricSpace& space, const PointSubset& set, double r);
// Closed enlargement {x : dist(x, A) <= r}.
PointSubset closed_set_ball(const FiniteMetricSpace& space, const PointSubset& set, double r);
double diameter(const FiniteMetricSpace& space, const PointSubset& set);
// Diameter of a set given as a raw sorted id list (no EmptySet check; 0 for
// fewer than two points).
double diameter_of(const FiniteMetricSpace& space, std::span<const PointId> ids);
Retraction nearest_point_retraction(const FiniteMetricSpace& space, const PointSubset& set);

// Smallest cross distance between two sets, with the realizing pair
// (lexicographically smallest on ties).
struct CrossDistance {
  double distance;
  PointId x;
  PointId y;
};
std::optional<CrossDistance> min_cross_distance(const FiniteMetricSpace& space,
                                                const PointSubset& a, const PointSubset& b);

}  // namespace coarse::metric
