#include "coarse/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "coarse/error.hpp"

namespace coarse::simplex {

class PointBuilder {
 public:
  // Entries must already be sorted by vertex with positive weights.
  static SimplexPoint make(std::vector<SimplexPoint::Entry> entries) {
    SimplexPoint p;
    p.entries_ = std::move(entries);
    return p;
  }
};

namespace {

double sum_of(const std::vector<SimplexPoint::Entry>& entries) {
  double s = 0.0;
  for (const auto& e : entries) s += e.second;
  return s;
}

void normalize_if_drifted(std::vector<SimplexPoint::Entry>& entries) {
  const double s = sum_of(entries);
  if (std::abs(s - 1.0) > kRenormalizeTrigger)
    for (auto& e : entries) e.second /= s;
  if (std::abs(sum_of(entries) - 1.0) > kSumTolerance)
    throw std::logic_error("simplex point left the simplex after arithmetic");
}

}  // namespace

std::string to_string(VertexId v) {
  return std::to_string(v.ns) + ":" + std::to_string(v.index);
}

VertexId parse_vertex_id(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw Error(Errc::ParseError, "vertex id must look like \"ns:index\", got \"" + text + "\"");
  auto parse_part = [&](const std::string& part) -> std::uint32_t {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw Error(Errc::ParseError, "bad vertex id \"" + text + "\"");
    const unsigned long long v = std::stoull(part);
    if (v > 0xffffffffULL) throw Error(Errc::ParseError, "vertex id out of range: " + text);
    return static_cast<std::uint32_t>(v);
  };
  return {parse_part(text.substr(0, colon)), parse_part(text.substr(colon + 1))};
}

// -------------------------------------------------------------- SimplexPoint

SimplexPoint SimplexPoint::vertex(VertexId v) { return PointBuilder::make({{v, 1.0}}); }

SimplexPoint SimplexPoint::from_weights(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double w = entries[i].second;
    if (!std::isfinite(w) || w <= 0.0 || w > 1.0 + kSumTolerance)
      throw Error(Errc::InvalidWeights, "weight " + std::to_string(w) + " on vertex " +
                                            to_string(entries[i].first) + " is not in (0, 1]");
    if (i > 0 && entries[i].first == entries[i - 1].first)
      throw Error(Errc::InvalidWeights, "vertex " + to_string(entries[i].first) + " repeated");
  }
  if (entries.empty()) throw Error(Errc::InvalidWeights, "simplex point has empty support");
  const double s = sum_of(entries);
  if (std::abs(s - 1.0) > kSumTolerance)
    throw Error(Errc::InvalidWeights, "weights sum to " + std::to_string(s));
  return PointBuilder::make(std::move(entries));
}

SimplexPoint SimplexPoint::barycenter(std::vector<VertexId> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.empty()) throw Error(Errc::InvalidWeights, "barycenter of no vertices");
  const double w = 1.0 / static_cast<double>(vertices.size());
  std::vector<Entry> entries;
  entries.reserve(vertices.size());
  for (VertexId v : vertices) entries.emplace_back(v, w);
  return PointBuilder::make(std::move(entries));
}

double SimplexPoint::weight(VertexId v) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, VertexId key) { return e.first < key; });
  return (it != entries_.end() && it->first == v) ? it->second : 0.0;
}

double SimplexPoint::total() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

double l1_distance(const SimplexPoint& u, const SimplexPoint& v) noexcept {
  const auto a = u.entries();
  const auto b = v.entries();
  std::size_t i = 0, j = 0;
  double s = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      s += a[i++].second;
    } else if (b[j].first < a[i].first) {
      s += b[j++].second;
    } else {
      s += std::abs(a[i].second - b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) s += a[i].second;
  for (; j < b.size(); ++j) s += b[j].second;
  return s;
}

SimplexPoint convex_combine(double t, const SimplexPoint& u, const SimplexPoint& v) {
  if (!(t >= 0.0 && t <= 1.0))
    throw Error(Errc::BadParams, "convex_combine parameter must lie in [0, 1]");
  if (t == 0.0) return v;
  if (t == 1.0) return u;
  const auto a = u.entries();
  const auto b = v.entries();
  const double s = 1.0 - t;
  std::vector<SimplexPoint::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  auto push = [&](VertexId id, double w) {
    if (w != 0.0) out.emplace_back(id, w);
  };
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      push(a[i].first, t * a[i].second);
      ++i;
    } else if (b[j].first < a[i].first) {
      push(b[j].first, s * b[j].second);
      ++j;
    } else {
      push(a[i].first, t * a[i].second + s * b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) push(a[i].first, t * a[i].second);
  for (; j < b.size(); ++j) push(b[j].first, s * b[j].second);
  normalize_if_drifted(out);
  return PointBuilder::make(std::move(out));
}

// ---------------------------------------------------------- PartitionOfUnity

const SimplexPoint& PartitionOfUnity::at(PointId x) const {
  if (!contains(x))
    throw Error(Errc::UnknownPoint, "point " + std::to_string(x) + " is not in the domain");
  return *values_[x];
}

void PartitionOfUnity::set(PointId x, SimplexPoint value) {
  if (x >= values_.size())
    throw Error(Errc::BadPoint, "point " + std::to_string(x) + " outside a universe of " +
                                    std::to_string(values_.size()));
  values_[x] = std::move(value);
}

void PartitionOfUnity::erase(PointId x) {
  if (x < values_.size()) values_[x].reset();
}

PointSubset PartitionOfUnity::domain() const {
  std::vector<PointId> ids;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i]) ids.push_back(static_cast<PointId>(i));
  return PointSubset::from_sorted(std::move(ids));
}

std::size_t PartitionOfUnity::domain_size() const noexcept {
  std::size_t k = 0;
  for (const auto& v : values_) k += v.has_value();
  return k;
}

PartitionOfUnity PartitionOfUnity::restricted_to(const PointSubset& subset) const {
  PartitionOfUnity out(values_.size());
  for (PointId x : subset)
    if (contains(x)) out.values_[x] = values_[x];
  return out;
}

std::vector<VertexId> carrier_vertices(const PartitionOfUnity& f) {
  return carrier_vertices(f, f.domain());
}

std::vector<VertexId> carrier_vertices(const PartitionOfUnity& f, const PointSubset& region) {
  std::set<VertexId> seen;
  for (PointId x : region)
    if (f.contains(x))
      for (const auto& [v, w] : f.at(x).entries()) seen.insert(v);
  return {seen.begin(), seen.end()};
}

std::map<VertexId, PointSubset> star_preimages(const PartitionOfUnity& f) {
  std::map<VertexId, std::vector<PointId>> acc;
  for (PointId x : f.domain())
    for (const auto& [v, w] : f.at(x).entries()) acc[v].push_back(x);
  std::map<VertexId, PointSubset> out;
  for (auto& [v, ids] : acc) out.emplace(v, PointSubset::from_sorted(std::move(ids)));
  return out;
}

StarDiameters star_preimage_diameters(const FiniteMetricSpace& space, const PartitionOfUnity& f) {
  StarDiameters out;
  for (const auto& [v, pre] : star_preimages(f)) {
    const double d = metric::diameter_of(space, pre.ids());
    out.per_vertex.emplace(v, d);
    if (!out.worst || d > out.max) {
      out.max = d;
      out.worst = v;
    }
  }
  return out;
}

PartitionOfUnity simplicial_retraction(const PartitionOfUnity& f, const VertexMap& r,
                                       const PointSubset& region) {
  for (const auto& [from, to] : r) {
    auto it = r.find(to);
    if (it == r.end() || it->second != to)
      throw Error(Errc::NotARetraction, "vertex " + to_string(to) + " is in the image of r but " +
                                            "r does not fix it");
  }
  PartitionOfUnity out = f;
  for (PointId x : region) {
    if (!f.contains(x))
      throw Error(Errc::PreconditionViolated,
                  "retraction region contains point " + std::to_string(x) + " outside the domain");
    std::map<VertexId, double> merged;
    for (const auto& [v, w] : f.at(x).entries()) {
      auto it = r.find(v);
      if (it == r.end())
        throw Error(Errc::SupportEscapes, "vertex " + to_string(v) + " at point " +
                                              std::to_string(x) + " is not in the domain of r");
      merged[it->second] += w;
    }
    std::vector<SimplexPoint::Entry> entries(merged.begin(), merged.end());
    out.set(x, PointBuilder::make(std::move(entries)));
  }
  return out;
}

PartitionOfUnity skeleton_truncate(const PartitionOfUnity& f, std::size_t n) {
  PartitionOfUnity out(f.universe());
  for (PointId x : f.domain()) {
    const SimplexPoint& p = f.at(x);
    if (p.support_size() <= n + 1) {
      out.set(x, p);
      continue;
    }
    std::vector<SimplexPoint::Entry> entries(p.entries().begin(), p.entries().end());
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    entries.resize(n + 1);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const double kept = sum_of(entries);
    for (auto& e : entries) e.second /= kept;
    out.set(x, PointBuilder::make(std::move(entries)));
  }
  return out;
}

PartitionOfUnity barycentric_pou(const FiniteMetricSpace& space,
                                 std::span<const PointSubset> cover) {
  const std::size_t n = space.size();
  std::vector<std::vector<VertexId>> members(n);
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (cover[i].empty())
      throw Error(Errc::EmptyMember, "cover member " + std::to_string(i) + " is empty");
    metric::check_subset(space, cover[i]);
    for (PointId x : cover[i]) members[x].push_back({0, static_cast<std::uint32_t>(i)});
  }
  PartitionOfUnity f(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (members[x].empty())
      throw Error(Errc::NotACover, "point " + std::to_string(x) + " is not covered");
    f.set(static_cast<PointId>(x), SimplexPoint::barycenter(std::move(members[x])));
  }
  return f;
}

PartitionOfUnity renamespace(const PartitionOfUnity& f, std::uint32_t ns) {
  const auto carrier = carrier_vertices(f);
  std::map<VertexId, VertexId> rename;
  for (std::size_t i = 0; i < carrier.size(); ++i)
    rename.emplace(carrier[i], VertexId{ns, static_cast<std::uint32_t>(i)});
  PartitionOfUnity out(f.universe());
  for (PointId x : f.domain()) {
    std::vector<SimplexPoint::Entry> entries;
    for (const auto& [v, w] : f.at(x).entries()) entries.emplace_back(rename.at(v), w);
    // rename is monotone, so order is preserved
    out.set(x, PointBuilder::make(std::move(entries)));
  }
  return out;
}

}  // namespace coarse::simplex
