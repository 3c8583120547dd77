#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/metric.hpp"
#include "coarse/parallel.hpp"
#include "coarse/simplex.hpp"

namespace coarse::verify {

using metric::FiniteMetricSpace;
using metric::PointId;
using metric::PointSubset;
using simplex::PartitionOfUnity;
using simplex::VertexId;

inline constexpr double kSlackTolerance = 1e-9;

enum class LipschitzMode { full, restricted };
// How restricted mode enumerates its candidate pairs. `automatic` scans the
// table when there is one and searches the graph otherwise.
enum class PairGather { automatic, table_scan, graph_search };

struct LipschitzOptions {
  LipschitzMode mode = LipschitzMode::restricted;
  PairGather gather = PairGather::automatic;
  ExecPolicy exec{};
};

struct LipschitzReport {
  double lambda = 0.0;
  double C = 0.0;
  LipschitzMode mode = LipschitzMode::full;
  double worst_slack = 0.0;  // +inf when no pair was checked
  std::optional<std::pair<PointId, PointId>> witness;
  std::size_t pairs_checked = 0;
  std::optional<double> restricted_radius;
  double tolerance = kSlackTolerance;
  bool pass = true;
};

// Full mode walks every unordered pair of the domain. Restricted mode needs
// lambda == C == eps and only looks at pairs with d < 2/eps - 1; every other
// pair has slack at least eps*(R+1) - 2 >= 0.
LipschitzReport lipschitz_check(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                                double lambda, double C, const LipschitzOptions& opts = {});

struct CoboundedReport {
  double bound = 0.0;
  double tight = 0.0;
  std::optional<VertexId> worst_vertex;  // vertex attaining `tight`
  std::size_t vertices = 0;
  double tolerance = kSlackTolerance;
  bool pass = true;
};

CoboundedReport cobounded_check(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                                double M);

struct CoverFamily {
  std::vector<PointSubset> members;
  std::optional<double> claimed_R;
  std::optional<double> claimed_bound;
};

struct DisjointReport {
  double R = 0.0;
  bool pass = true;
  // Closest cross pair (x in members[s], y in members[t]) when it fails.
  std::optional<metric::CrossDistance> witness;
  std::optional<std::pair<std::size_t, std::size_t>> witness_members;
};

DisjointReport r_disjoint_check(const FiniteMetricSpace& space, const CoverFamily& family,
                                double R);

struct BoundReport {
  double M = 0.0;
  std::optional<std::size_t> worst_member;
};

// Exact max member diameter; throws EmptyMember.
BoundReport uniformly_bounded_check(const FiniteMetricSpace& space, const CoverFamily& family);

struct LebesgueReport {
  double M = 0.0;
  bool pass = true;
  std::optional<PointId> witness;
};

// Every open ball B(x, M) must sit inside one member. Throws NotACover.
LebesgueReport lebesgue_check(const FiniteMetricSpace& space, const CoverFamily& cover, double M);

struct MultiplicityReport {
  std::size_t max = 0;
  std::optional<PointId> witness;        // first point attaining max
  std::map<std::size_t, std::size_t> histogram;  // count -> number of points
};

MultiplicityReport multiplicity(const FiniteMetricSpace& space, const CoverFamily& cover);

std::string to_string(LipschitzMode mode);
LipschitzMode parse_lipschitz_mode(const std::string& text);

}  // namespace coarse::verify
