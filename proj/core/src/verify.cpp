#include "coarse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "coarse/error.hpp"

namespace coarse::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Worst {
  double slack = kInf;
  PointId x = 0;
  PointId y = 0;
  bool any = false;
  std::size_t pairs = 0;

  void offer(double s, PointId a, PointId b) {
    ++pairs;
    if (!any || std::tie(s, a, b) < std::tie(slack, x, y)) {
      slack = s;
      x = a;
      y = b;
      any = true;
    }
  }
  void merge(const Worst& o) {
    pairs += o.pairs;
    if (o.any && (!any || std::tie(o.slack, o.x, o.y) < std::tie(slack, x, y))) {
      slack = o.slack;
      x = o.x;
      y = o.y;
      any = true;
    }
  }
};

}  // namespace

std::string to_string(LipschitzMode mode) {
  return mode == LipschitzMode::full ? "full" : "restricted";
}

LipschitzMode parse_lipschitz_mode(const std::string& text) {
  if (text == "full") return LipschitzMode::full;
  if (text == "restricted") return LipschitzMode::restricted;
  throw Error(Errc::BadMode, "unknown verification mode \"" + text + "\"");
}

LipschitzReport lipschitz_check(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                                double lambda, double C, const LipschitzOptions& opts) {
  if (f.universe() != space.size())
    throw Error(Errc::BadPoint, "partition of unity lives on a space of size " +
                                    std::to_string(f.universe()) + ", expected " +
                                    std::to_string(space.size()));
  LipschitzReport rep;
  rep.lambda = lambda;
  rep.C = C;
  rep.mode = opts.mode;

  const auto domain = f.domain();
  const auto ids = domain.ids();
  const std::size_t k = ids.size();
  const std::size_t chunks = chunk_count(opts.exec, k);
  std::vector<Worst> partial(chunks);

  if (opts.mode == LipschitzMode::full) {
    parallel_chunks(opts.exec, k, [&](std::size_t c, std::size_t begin, std::size_t end) {
      Worst w;
      for (std::size_t i = begin; i < end; ++i) {
        const auto& fx = f.at(ids[i]);
        for (std::size_t j = i + 1; j < k; ++j) {
          const double d = space.distance(ids[i], ids[j]);
          w.offer(lambda * d + C - simplex::l1_distance(fx, f.at(ids[j])), ids[i], ids[j]);
        }
      }
      partial[c] = w;
    });
  } else {
    if (lambda != C)
      throw Error(Errc::BadMode, "restricted mode needs lambda == C");
    if (!(lambda > 0.0)) throw Error(Errc::BadMode, "restricted mode needs a positive epsilon");
    const double R = 2.0 / lambda - 1.0;
    rep.restricted_radius = R;
    const auto in_domain = domain.mask(space.size());
    PairGather gather = opts.gather;
    if (gather == PairGather::automatic)
      gather = space.has_table() || space.provenance() != metric::Provenance::graph
                   ? PairGather::table_scan
                   : PairGather::graph_search;
    if (gather == PairGather::graph_search && space.provenance() != metric::Provenance::graph)
      throw Error(Errc::BadMode, "graph search needs a graph-backed space");
    if (R > 0.0) {
      parallel_chunks(opts.exec, k, [&](std::size_t c, std::size_t begin, std::size_t end) {
        Worst w;
        for (std::size_t i = begin; i < end; ++i) {
          const PointId x = ids[i];
          const auto& fx = f.at(x);
          auto visit = [&](PointId y, double d) {
            w.offer(lambda * d + C - simplex::l1_distance(fx, f.at(y)), x, y);
          };
          if (gather == PairGather::table_scan) {
            for (std::size_t j = i + 1; j < k; ++j) {
              const double d = space.distance(x, ids[j]);
              if (d < R) visit(ids[j], d);
            }
          } else {
            for (const auto& nb : space.ball(x, R))
              if (nb.id > x && in_domain[nb.id]) visit(nb.id, nb.distance);
          }
        }
        partial[c] = w;
      });
    }
  }

  Worst total;
  for (const auto& w : partial) total.merge(w);
  rep.pairs_checked = total.pairs;
  rep.worst_slack = total.any ? total.slack : kInf;
  if (total.any) rep.witness = std::make_pair(total.x, total.y);
  rep.pass = rep.worst_slack >= -rep.tolerance;
  return rep;
}

CoboundedReport cobounded_check(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                                double M) {
  CoboundedReport rep;
  rep.bound = M;
  const auto diam = simplex::star_preimage_diameters(space, f);
  rep.tight = diam.max;
  rep.worst_vertex = diam.worst;
  rep.vertices = diam.per_vertex.size();
  rep.pass = rep.tight <= M + rep.tolerance;
  return rep;
}

DisjointReport r_disjoint_check(const FiniteMetricSpace& space, const CoverFamily& family,
                                double R) {
  DisjointReport rep;
  rep.R = R;
  const auto& ms = family.members;
  for (const auto& m : ms) metric::check_subset(space, m);
  for (std::size_t s = 0; s < ms.size(); ++s)
    for (std::size_t t = s + 1; t < ms.size(); ++t) {
      const auto cd = metric::min_cross_distance(space, ms[s], ms[t]);
      if (!cd || cd->distance > R) continue;
      if (!rep.witness || cd->distance < rep.witness->distance) {
        rep.witness = cd;
        rep.witness_members = std::make_pair(s, t);
      }
    }
  rep.pass = !rep.witness.has_value();
  return rep;
}

BoundReport uniformly_bounded_check(const FiniteMetricSpace& space, const CoverFamily& family) {
  BoundReport rep;
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto& m = family.members[i];
    if (m.empty()) throw Error(Errc::EmptyMember, "member " + std::to_string(i) + " is empty");
    metric::check_subset(space, m);
    const double d = metric::diameter_of(space, m.ids());
    if (!rep.worst_member || d > rep.M) {
      rep.M = d;
      rep.worst_member = i;
    }
  }
  return rep;
}

namespace {

// owners[x] = indices of members containing x.
std::vector<std::vector<std::size_t>> owners_of(const FiniteMetricSpace& space,
                                                const CoverFamily& cover) {
  std::vector<std::vector<std::size_t>> owners(space.size());
  for (std::size_t i = 0; i < cover.members.size(); ++i) {
    metric::check_subset(space, cover.members[i]);
    for (PointId x : cover.members[i]) owners[x].push_back(i);
  }
  return owners;
}

}  // namespace

LebesgueReport lebesgue_check(const FiniteMetricSpace& space, const CoverFamily& cover, double M) {
  LebesgueReport rep;
  rep.M = M;
  const auto owners = owners_of(space, cover);
  for (std::size_t x = 0; x < owners.size(); ++x)
    if (owners[x].empty())
      throw Error(Errc::NotACover, "point " + std::to_string(x) + " is not covered");
  for (std::size_t x = 0; x < owners.size(); ++x) {
    const auto ball = space.ball(static_cast<PointId>(x), M);
    bool inside = ball.empty();
    for (std::size_t owner : owners[x]) {
      const auto& member = cover.members[owner];
      inside = std::all_of(ball.begin(), ball.end(),
                           [&](const metric::Neighbor& nb) { return member.contains(nb.id); });
      if (inside) break;
    }
    if (!inside) {
      rep.pass = false;
      rep.witness = static_cast<PointId>(x);
      break;
    }
  }
  return rep;
}

MultiplicityReport multiplicity(const FiniteMetricSpace& space, const CoverFamily& cover) {
  MultiplicityReport rep;
  const auto owners = owners_of(space, cover);
  for (std::size_t x = 0; x < owners.size(); ++x) {
    const std::size_t c = owners[x].size();
    ++rep.histogram[c];
    if (!rep.witness || c > rep.max) {
      rep.max = c;
      rep.witness = static_cast<PointId>(x);
    }
  }
  return rep;
}

}  // namespace coarse::verify
