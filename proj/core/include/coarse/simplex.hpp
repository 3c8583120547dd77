#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarse/metric.hpp"

namespace coarse::simplex {

using metric::FiniteMetricSpace;
using metric::PointId;
using metric::PointSubset;

// Sum-to-one tolerance every stored point must satisfy.
inline constexpr double kSumTolerance = 1e-9;
// Convex combinations renormalize only when the sum drifts beyond this.
inline constexpr double kRenormalizeTrigger = 1e-12;

// Vertex of the simplex. Namespace 0 holds user-supplied vertices; every
// extension mints vertices in a namespace of its own.
struct VertexId {
  std::uint32_t ns = 0;
  std::uint32_t index = 0;

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

std::string to_string(VertexId v);
// Parses "ns:index"; throws ParseError.
VertexId parse_vertex_id(const std::string& text);

// Finitely supported nonnegative weights summing to one. Entries are sorted by
// vertex and every stored weight is strictly positive.
class SimplexPoint {
 public:
  using Entry = std::pair<VertexId, double>;

  static SimplexPoint vertex(VertexId v);
  // Throws InvalidWeights unless the weights are positive, finite, summing to
  // one within kSumTolerance, with no repeated vertex.
  static SimplexPoint from_weights(std::vector<Entry> entries);
  // Uniform weight over `vertices` (barycenter of the face they span).
  static SimplexPoint barycenter(std::vector<VertexId> vertices);

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  double weight(VertexId v) const noexcept;
  double total() const noexcept;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  friend class PointBuilder;
  std::vector<Entry> entries_;
};

double l1_distance(const SimplexPoint& u, const SimplexPoint& v) noexcept;
// t*u + (1-t)*v with exact-zero entries dropped.
SimplexPoint convex_combine(double t, const SimplexPoint& u, const SimplexPoint& v);

// Map from a subset of a host space into the simplex.
class PartitionOfUnity {
 public:
  PartitionOfUnity() = default;
  explicit PartitionOfUnity(std::size_t universe) : values_(universe) {}

  std::size_t universe() const noexcept { return values_.size(); }
  bool contains(PointId x) const noexcept { return x < values_.size() && values_[x].has_value(); }
  const SimplexPoint& at(PointId x) const;
  void set(PointId x, SimplexPoint value);
  void erase(PointId x);

  PointSubset domain() const;
  std::size_t domain_size() const noexcept;
  bool empty() const noexcept { return domain_size() == 0; }
  PartitionOfUnity restricted_to(const PointSubset& subset) const;

  friend bool operator==(const PartitionOfUnity&, const PartitionOfUnity&) = default;

 private:
  std::vector<std::optional<SimplexPoint>> values_;
};

// Vertices carrying positive weight somewhere on the domain, ascending.
std::vector<VertexId> carrier_vertices(const PartitionOfUnity& f);
std::vector<VertexId> carrier_vertices(const PartitionOfUnity& f, const PointSubset& region);

// star_pre(v) = {x : f(x)(v) > 0} for every carrier vertex.
std::map<VertexId, PointSubset> star_preimages(const PartitionOfUnity& f);

struct StarDiameters {
  std::map<VertexId, double> per_vertex;
  double max = 0.0;
  std::optional<VertexId> worst;  // first vertex attaining max
};
StarDiameters star_preimage_diameters(const FiniteMetricSpace& space, const PartitionOfUnity& f);

using VertexMap = std::map<VertexId, VertexId>;

// Re-addresses weights through r on `region`, summing merged weights. The
// image of r is S1; r must fix S1 and be defined on every vertex of f's
// support over the region.
PartitionOfUnity simplicial_retraction(const PartitionOfUnity& f, const VertexMap& r,
                                       const PointSubset& region);

// Keeps the n+1 largest weights at every point (smaller VertexId wins ties)
// and renormalizes.
PartitionOfUnity skeleton_truncate(const PartitionOfUnity& f, std::size_t n);

// One vertex (0, i) per cover member i, uniform weights over the members
// containing each point. Throws NotACover naming an uncovered point.
PartitionOfUnity barycentric_pou(const FiniteMetricSpace& space,
                                 std::span<const PointSubset> cover);

// Hands out fresh vertex namespaces. Thread-safe.
class VertexMinter {
 public:
  explicit VertexMinter(std::uint32_t first = 1) : next_(first) {}
  std::uint32_t fresh_namespace() noexcept { return next_.fetch_add(1); }
  VertexId fresh_vertex() noexcept { return {fresh_namespace(), 0}; }
  std::uint32_t peek() const noexcept { return next_.load(); }

 private:
  std::atomic<std::uint32_t> next_;
};

// Moves every vertex of f into one fresh namespace (indices follow vertex
// order), so the result's carrier is disjoint from anything minted earlier.
PartitionOfUnity renamespace(const PartitionOfUnity& f, std::uint32_t ns);

}  // namespace coarse::simplex
