#include "coarse/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse::metric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pair_str(PointId x, PointId y) {
  std::ostringstream os;
  os << "(" << x << ", " << y << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- PointSubset

PointSubset::PointSubset(std::vector<PointId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  auto dup = std::adjacent_find(ids_.begin(), ids_.end());
  if (dup != ids_.end())
    throw Error(Errc::BadPoint, "duplicate point id " + std::to_string(*dup));
}

PointSubset PointSubset::all(std::size_t n) {
  PointSubset s;
  s.ids_.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.ids_[i] = static_cast<PointId>(i);
  return s;
}

PointSubset PointSubset::interval(PointId first, PointId last) {
  PointSubset s;
  if (last < first) return s;
  s.ids_.reserve(last - first + 1);
  for (PointId i = first;; ++i) {
    s.ids_.push_back(i);
    if (i == last) break;
  }
  return s;
}

PointSubset PointSubset::from_sorted(std::vector<PointId> ids) {
  PointSubset s;
  s.ids_ = std::move(ids);
  return s;
}

bool PointSubset::contains(PointId x) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), x);
}

std::vector<char> PointSubset::mask(std::size_t universe) const {
  std::vector<char> m(universe, 0);
  for (PointId x : ids_)
    if (x < universe) m[x] = 1;
  return m;
}

bool PointSubset::is_subset_of(const PointSubset& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

PointSubset set_union(const PointSubset& a, const PointSubset& b) {
  std::vector<PointId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSubset::from_sorted(std::move(out));
}

PointSubset set_intersection(const PointSubset& a, const PointSubset& b) {
  std::vector<PointId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSubset::from_sorted(std::move(out));
}

PointSubset set_difference(const PointSubset& a, const PointSubset& b) {
  std::vector<PointId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSubset::from_sorted(std::move(out));
}

PointSubset from_mask(const std::vector<char>& mask) {
  std::vector<PointId> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<PointId>(i));
  return PointSubset::from_sorted(std::move(out));
}

// ---------------------------------------------------------- FiniteMetricSpace

struct FiniteMetricSpace::Data {
  std::size_t n = 0;
  Provenance provenance = Provenance::matrix;
  std::vector<double> table;  // row-major n*n, empty when not materialized
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<PointId, double>>> adjacency;
  std::vector<std::vector<double>> coords;
  double p = 2.0;

  double point_distance(PointId x, PointId y) const {
    const auto& a = coords[x];
    const auto& b = coords[y];
    if (std::isinf(p)) {
      double m = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
      return m;
    }
    if (p == 1.0) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
      return s;
    }
    if (p == 2.0) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::pow(std::abs(a[k] - b[k]), p);
    return std::pow(s, 1.0 / p);
  }

  // Dijkstra from `source`, settling only vertices at distance < radius.
  // Unsettled entries stay +inf. Stops early once `target` is settled.
  std::vector<double> dijkstra(PointId source, double radius,
                               std::optional<PointId> target = std::nullopt) const {
    std::vector<double> dist(n, kInf);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (done[u] || d > dist[u]) continue;
      if (!(d < radius)) break;
      done[u] = 1;
      if (target && *target == u) break;
      for (const auto& [v, w] : adjacency[u]) {
        const double nd = d + w;
        if (!done[v] && nd < dist[v]) {
          dist[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i]) dist[i] = kInf;
    return dist;
  }

  double distance(PointId x, PointId y) const {
    if (x == y) return 0.0;
    if (!table.empty()) return table[static_cast<std::size_t>(x) * n + y];
    if (provenance == Provenance::points) return point_distance(x, y);
    const PointId s = std::min(x, y), t = std::max(x, y);
    return dijkstra(s, kInf, t)[t];
  }
};

namespace {

using Data = FiniteMetricSpace::Data;

void check_table_axioms(const Data& d) {
  const std::size_t n = d.n;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double v = d.table[x * n + y];
      if (!std::isfinite(v))
        throw Error(Errc::NonFinite, "d" + pair_str(x, y) + " is not finite");
      if (x == y) {
        if (v != 0.0)
          throw Error(Errc::NonZeroDiagonal, "d" + pair_str(x, x) + " = " + std::to_string(v));
        continue;
      }
      if (v < 0.0)
        throw Error(Errc::NegativeDistance, "d" + pair_str(x, y) + " = " + std::to_string(v));
      if (v == 0.0)
        throw Error(Errc::ZeroOffDiagonal, "d" + pair_str(x, y) + " = 0 for distinct points");
      if (v != d.table[y * n + x])
        throw Error(Errc::Asymmetry, "d" + pair_str(x, y) + " = " + std::to_string(v) +
                                         " but d" + pair_str(y, x) + " = " +
                                         std::to_string(d.table[y * n + x]));
    }
  }
}

[[noreturn]] void triangle_error(const Data& d, std::size_t x, std::size_t y, std::size_t z) {
  std::ostringstream os;
  os.precision(17);
  os << "d(" << x << ", " << z << ") = " << d.distance(x, z) << " > d(" << x << ", " << y
     << ") + d(" << y << ", " << z << ") = " << d.distance(x, y) + d.distance(y, z);
  throw Error(Errc::TriangleViolation, os.str());
}

// Exhaustive check over all triples; reports the lexicographically smallest
// violating (x, y, z). Symmetry lets z range over z > x only. The inner loop
// keeps a running elementwise maximum of d(x,z) - bound so it vectorizes, and
// x runs in blocks so each row y is streamed once per block. A positive
// entry sends us back for the exact witness.
void check_triangles_exhaustive(const Data& d) {
  constexpr std::size_t kBlock = 32;
  constexpr double kScale = 1.0 + kTriangleTolerance;
  const std::size_t n = d.n;
  const double* t = d.table.data();
  std::vector<double> excess(kBlock * n);
  for (std::size_t x0 = 0; x0 < n; x0 += kBlock) {
    const std::size_t x1 = std::min(n, x0 + kBlock);
    std::fill(excess.begin(), excess.end(), -kInf);
    for (std::size_t y = 0; y < n; ++y) {
      const double* __restrict ry = t + y * n;
      for (std::size_t x = x0; x < x1; ++x) {
        const double* __restrict rx = t + x * n;
        double* __restrict ex = excess.data() + (x - x0) * n;
        // rx[z] - (s + tol*(1+s)) with s = dxy + ry[z], regrouped
        const double a = rx[y] * kScale + kTriangleTolerance;
        for (std::size_t z = x + 1; z < n; ++z) {
          const double e = rx[z] - (ry[z] * kScale + a);
          ex[z] = e > ex[z] ? e : ex[z];
        }
      }
    }
    if (std::none_of(excess.begin(), excess.end(), [](double e) { return e > 0.0; })) continue;
    for (std::size_t x = x0; x < x1; ++x) {
      const double* rx = t + x * n;
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = x + 1; z < n; ++z) {
          const double s = rx[y] + t[y * n + z];
          if (rx[z] > s + kTriangleTolerance * (1.0 + s)) triangle_error(d, x, y, z);
        }
    }
  }
}

void check_triangles_sampled(const Data& d) {
  const std::size_t n = d.n;
  std::mt19937_64 rng(0x7269616e676c65ULL);
  const std::uint64_t samples = 10ULL * n * n;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto x = static_cast<PointId>(rng() % n);
    const auto y = static_cast<PointId>(rng() % n);
    const auto z = static_cast<PointId>(rng() % n);
    const double s = d.distance(x, y) + d.distance(y, z);
    if (d.distance(x, z) > s + kTriangleTolerance * (1.0 + s)) triangle_error(d, x, y, z);
  }
}

void check_triangles(const Data& d) {
  if (d.n <= kExhaustiveTriangleLimit && !d.table.empty()) {
    check_triangles_exhaustive(d);
  } else if (!d.table.empty() || d.provenance == Provenance::points) {
    check_triangles_sampled(d);
  }
  // Shortest-path metrics without a table satisfy the triangle inequality by
  // construction; sampling them would cost one Dijkstra per query.
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::from_matrix(const std::vector<std::vector<double>>& rows) {
  auto data = std::make_shared<Data>();
  const std::size_t n = rows.size();
  if (n == 0) throw Error(Errc::EmptySet, "distance matrix has no rows");
  for (std::size_t i = 0; i < n; ++i)
    if (rows[i].size() != n)
      throw Error(Errc::NotSquare, "row " + std::to_string(i) + " has " +
                                       std::to_string(rows[i].size()) + " entries, expected " +
                                       std::to_string(n));
  data->n = n;
  data->provenance = Provenance::matrix;
  data->table.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(rows[i].begin(), rows[i].end(), data->table.begin() + static_cast<std::ptrdiff_t>(i * n));
  check_table_axioms(*data);
  check_triangles(*data);
  return FiniteMetricSpace(std::move(data));
}

FiniteMetricSpace FiniteMetricSpace::from_graph(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw Error(Errc::EmptySet, "graph has no vertices");
  auto data = std::make_shared<Data>();
  data->n = n;
  data->provenance = Provenance::graph;
  data->edges.assign(edges.begin(), edges.end());
  data->adjacency.resize(n);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw Error(Errc::BadPoint, "edge " + pair_str(e.u, e.v) + " references a vertex >= " +
                                      std::to_string(n));
    if (!std::isfinite(e.weight))
      throw Error(Errc::NonFinite, "edge " + pair_str(e.u, e.v) + " has non-finite weight");
    if (e.weight < 0.0)
      throw Error(Errc::NegativeDistance, "edge " + pair_str(e.u, e.v) + " has weight " +
                                              std::to_string(e.weight));
    if (e.u == e.v) continue;
    if (e.weight == 0.0)
      throw Error(Errc::ZeroOffDiagonal,
                  "edge " + pair_str(e.u, e.v) + " has weight 0 between distinct vertices");
    data->adjacency[e.u].emplace_back(e.v, e.weight);
    data->adjacency[e.v].emplace_back(e.u, e.weight);
  }
  for (auto& adj : data->adjacency) std::sort(adj.begin(), adj.end());

  // Connectivity by BFS from vertex 0.
  std::vector<char> seen(n, 0);
  std::vector<PointId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    PointId u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : data->adjacency[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      throw Error(Errc::Disconnected, "vertex " + std::to_string(i) +
                                          " is not reachable from vertex 0 (stranded component)");

  if (n <= kDenseTableLimit) {
    data->table.assign(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      const auto row = data->dijkstra(static_cast<PointId>(x), kInf);
      for (std::size_t y = x + 1; y < n; ++y) {
        data->table[x * n + y] = row[y];
        data->table[y * n + x] = row[y];
      }
    }
    check_triangles(*data);
  }
  return FiniteMetricSpace(std::move(data));
}

FiniteMetricSpace FiniteMetricSpace::from_points(std::vector<std::vector<double>> coords,
                                                 double p) {
  if (std::isnan(p) || p < 1.0)
    throw Error(Errc::BadNorm, "norm parameter must be in [1, inf], got " + std::to_string(p));
  if (coords.empty()) throw Error(Errc::EmptySet, "point cloud is empty");
  const std::size_t dim = coords.front().size();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].size() != dim)
      throw Error(Errc::MixedArity, "point " + std::to_string(i) + " has " +
                                        std::to_string(coords[i].size()) +
                                        " coordinates, expected " + std::to_string(dim));
    for (double c : coords[i])
      if (!std::isfinite(c))
        throw Error(Errc::NonFinite, "point " + std::to_string(i) + " has a non-finite coordinate");
  }
  auto data = std::make_shared<Data>();
  data->n = coords.size();
  data->provenance = Provenance::points;
  data->coords = std::move(coords);
  data->p = p;
  const std::size_t n = data->n;
  if (n <= kDenseTableLimit) {
    data->table.assign(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        const double v = data->point_distance(static_cast<PointId>(x), static_cast<PointId>(y));
        data->table[x * n + y] = v;
        data->table[y * n + x] = v;
      }
    check_table_axioms(*data);
  } else {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return data->coords[a] < data->coords[b]; });
    for (std::size_t i = 1; i < n; ++i)
      if (data->coords[order[i]] == data->coords[order[i - 1]])
        throw Error(Errc::ZeroOffDiagonal,
                    "points " + pair_str(static_cast<PointId>(order[i - 1]),
                                         static_cast<PointId>(order[i])) + " coincide");
  }
  check_triangles(*data);
  return FiniteMetricSpace(std::move(data));
}

std::size_t FiniteMetricSpace::size() const noexcept { return data_->n; }
Provenance FiniteMetricSpace::provenance() const noexcept { return data_->provenance; }
bool FiniteMetricSpace::has_table() const noexcept { return !data_->table.empty(); }

double FiniteMetricSpace::distance(PointId x, PointId y) const { return data_->distance(x, y); }

std::vector<Neighbor> FiniteMetricSpace::ball(PointId x, double radius) const {
  std::vector<Neighbor> out;
  const std::size_t n = data_->n;
  if (data_->provenance == Provenance::graph) {
    const auto dist = data_->dijkstra(x, radius);
    for (std::size_t y = 0; y < n; ++y)
      if (dist[y] < radius) out.push_back({static_cast<PointId>(y), dist[y]});
    return out;
  }
  for (std::size_t y = 0; y < n; ++y) {
    const double d = data_->distance(x, static_cast<PointId>(y));
    if (d < radius) out.push_back({static_cast<PointId>(y), d});
  }
  return out;
}

std::vector<double> FiniteMetricSpace::row(PointId x) const {
  const std::size_t n = data_->n;
  if (!data_->table.empty())
    return {data_->table.begin() + static_cast<std::ptrdiff_t>(x * n),
            data_->table.begin() + static_cast<std::ptrdiff_t>((x + 1) * n)};
  if (data_->provenance == Provenance::graph) return data_->dijkstra(x, kInf);
  std::vector<double> r(n);
  for (std::size_t y = 0; y < n; ++y) r[y] = data_->distance(x, static_cast<PointId>(y));
  return r;
}

std::span<const Edge> FiniteMetricSpace::edges() const { return data_->edges; }
const std::vector<std::vector<double>>& FiniteMetricSpace::coords() const { return data_->coords; }
double FiniteMetricSpace::norm_p() const { return data_->p; }

// ------------------------------------------------------------------ set ops

void check_subset(const FiniteMetricSpace& space, const PointSubset& subset) {
  if (!subset.empty() && subset.back() >= space.size())
    throw Error(Errc::BadPoint, "point id " + std::to_string(subset.back()) +
                                    " is not in a space of size " + std::to_string(space.size()));
}

namespace {

void require_nonempty(const PointSubset& set, const char* op) {
  if (set.empty()) throw Error(Errc::EmptySet, std::string(op) + " requires a nonempty set");
}

// dist(x, A) for every x, with the smallest-id nearest point.
void nearest_all(const FiniteMetricSpace& space, const PointSubset& set,
                 std::vector<double>& dist, std::vector<PointId>& arg) {
  const std::size_t n = space.size();
  dist.assign(n, kInf);
  arg.assign(n, 0);
  if (space.has_table()) {
    for (std::size_t x = 0; x < n; ++x) {
      double best = kInf;
      PointId who = 0;
      for (PointId a : set) {
        const double d = space.distance(static_cast<PointId>(x), a);
        if (d < best) {
          best = d;
          who = a;
        }
      }
      dist[x] = best;
      arg[x] = who;
    }
    return;
  }
  for (PointId a : set) {
    const auto r = space.row(a);
    for (std::size_t x = 0; x < n; ++x)
      if (r[x] < dist[x]) {
        dist[x] = r[x];
        arg[x] = a;
      }
  }
  for (PointId a : set) {
    dist[a] = 0.0;
    arg[a] = a;
  }
}

}  // namespace

double dist_to_set(const FiniteMetricSpace& space, PointId x, const PointSubset& set) {
  require_nonempty(set, "dist_to_set");
  check_subset(space, set);
  if (x >= space.size()) throw Error(Errc::BadPoint, "point id " + std::to_string(x));
  double best = kInf;
  for (PointId a : set) best = std::min(best, space.distance(x, a));
  return best;
}

PointSubset set_ball(const FiniteMetricSpace& space, const PointSubset& set, double r) {
  require_nonempty(set, "set_ball");
  check_subset(space, set);
  if (!(r > 0.0)) throw Error(Errc::BadParams, "set_ball radius must be positive");
  std::vector<double> dist;
  std::vector<PointId> arg;
  nearest_all(space, set, dist, arg);
  std::vector<PointId> out;
  for (std::size_t x = 0; x < dist.size(); ++x)
    if (dist[x] < r) out.push_back(static_cast<PointId>(x));
  return PointSubset::from_sorted(std::move(out));
}

PointSubset closed_set_ball(const FiniteMetricSpace& space, const PointSubset& set, double r) {
  require_nonempty(set, "closed_set_ball");
  check_subset(space, set);
  if (!(r >= 0.0)) throw Error(Errc::BadParams, "closed_set_ball radius must be nonnegative");
  std::vector<double> dist;
  std::vector<PointId> arg;
  nearest_all(space, set, dist, arg);
  std::vector<PointId> out;
  for (std::size_t x = 0; x < dist.size(); ++x)
    if (dist[x] <= r) out.push_back(static_cast<PointId>(x));
  return PointSubset::from_sorted(std::move(out));
}

double diameter_of(const FiniteMetricSpace& space, std::span<const PointId> ids) {
  double best = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      best = std::max(best, space.distance(ids[i], ids[j]));
  return best;
}

double diameter(const FiniteMetricSpace& space, const PointSubset& set) {
  require_nonempty(set, "diameter");
  check_subset(space, set);
  return diameter_of(space, set.ids());
}

Retraction nearest_point_retraction(const FiniteMetricSpace& space, const PointSubset& set) {
  require_nonempty(set, "nearest_point_retraction");
  check_subset(space, set);
  Retraction p;
  p.image = set;
  nearest_all(space, set, p.distance, p.target);
  return p;
}

std::optional<CrossDistance> min_cross_distance(const FiniteMetricSpace& space,
                                                const PointSubset& a, const PointSubset& b) {
  std::optional<CrossDistance> best;
  for (PointId x : a)
    for (PointId y : b) {
      if (x == y) return CrossDistance{0.0, x, y};
      const double d = space.distance(x, y);
      if (!best || d < best->distance) best = CrossDistance{d, x, y};
    }
  return best;
}

}  // namespace coarse::metric
