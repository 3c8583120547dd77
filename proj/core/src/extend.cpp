#include "coarse/extend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coarse::extend {

namespace {

using simplex::SimplexPoint;
using simplex::VertexId;

// Relative slack on the inequality gates, so that r = 8/eps and
// delta = E(eps) computed along different float paths still pass.
constexpr double kGateSlack = 1e-12;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool at_most(double lhs, double rhs) { return lhs <= rhs + kGateSlack * std::abs(rhs); }

verify::LipschitzOptions lip_opts(const ExtendOptions& opts) {
  return {opts.verify_mode, verify::PairGather::automatic, opts.exec};
}

void require_lipschitz(const FiniteMetricSpace& space, const PartitionOfUnity& f, double delta,
                       const ExtendOptions& opts, const char* name) {
  const auto rep = verify::lipschitz_check(space, f, delta, delta, lip_opts(opts));
  if (!rep.pass)
    throw Error(Errc::PreconditionViolated,
                std::string(name) + " is not (" + num(delta) + ", " + num(delta) +
                    ")-Lipschitz: slack " + num(rep.worst_slack) + " at (" +
                    std::to_string(rep.witness->first) + ", " +
                    std::to_string(rep.witness->second) + ")");
}

void require_cobounded(const FiniteMetricSpace& space, const PartitionOfUnity& f, double M,
                       const char* name) {
  const auto rep = verify::cobounded_check(space, f, M);
  if (!rep.pass)
    throw Error(Errc::PreconditionViolated, std::string(name) + " is not " + num(M) +
                                                "-cobounded: a star preimage has diameter " +
                                                num(rep.tight));
}

void require_same_space(const FiniteMetricSpace& space, const PartitionOfUnity& f) {
  if (f.universe() != space.size())
    throw Error(Errc::BadPoint, "partition of unity lives on a space of size " +
                                    std::to_string(f.universe()) + ", expected " +
                                    std::to_string(space.size()));
}

void post_verify(const FiniteMetricSpace& space, Extension& ext, double eps,
                 const ExtendOptions& opts) {
  if (!opts.post_verify) return;
  ext.lipschitz = verify::lipschitz_check(space, ext.pou, eps, eps, lip_opts(opts));
  if (ext.bound) ext.cobounded = verify::cobounded_check(space, ext.pou, *ext.bound);
}

// The pasting kernel shared by every extension.
template <typename Outer>
PartitionOfUnity blend(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                       const PointSubset& target, double r, Outer&& outer) {
  const auto A = f.domain();
  const auto p = metric::nearest_point_retraction(space, A);
  PartitionOfUnity h(space.size());
  for (PointId x : target) {
    if (f.contains(x)) {
      h.set(x, f.at(x));
      continue;
    }
    const double alpha = std::min(p.distance[x] / r, 1.0);
    if (alpha >= 1.0)
      h.set(x, outer(x));
    else
      h.set(x, simplex::convex_combine(alpha, outer(x), f.at(p(x))));
  }
  return h;
}

bool disjoint(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

}  // namespace

bool Extension::verified() const {
  return (!lipschitz || lipschitz->pass) && (!cobounded || cobounded->pass);
}

Extension paste(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                const PartitionOfUnity& g, double r, double eps, double delta,
                std::optional<double> M, const ExtendOptions& opts) {
  require_same_space(space, f);
  require_same_space(space, g);
  if (f.empty()) throw Error(Errc::EmptySubset, "paste needs f on a nonempty set");
  if (g.domain_size() != space.size())
    throw Error(Errc::PreconditionViolated, "g must be defined on every point");
  if (!(eps > 0.0)) throw Error(Errc::BadEpsilon, "epsilon must be positive");
  if (!at_most(4.0 / eps, r))
    throw Error(Errc::PreconditionViolated, "r >= 4/eps fails: r = " + num(r) +
                                                ", 4/eps = " + num(4.0 / eps));
  if (!at_most(delta, eps / 3.0 - 2.0 / (3.0 * r)))
    throw Error(Errc::PreconditionViolated,
                "delta <= eps/3 - 2/(3r) fails: delta = " + num(delta) + ", bound = " +
                    num(eps / 3.0 - 2.0 / (3.0 * r)));
  if (!at_most(delta, eps / (4.0 * r + 7.0)))
    throw Error(Errc::PreconditionViolated, "delta <= eps/(4r+7) fails: delta = " + num(delta) +
                                                ", bound = " + num(eps / (4.0 * r + 7.0)));
  if (opts.input == InputCheck::verify) {
    require_lipschitz(space, f, delta, opts, "f");
    require_lipschitz(space, g, delta, opts, "g");
  }

  Extension ext;
  ext.pou = blend(space, f, PointSubset::all(space.size()), r,
                  [&](PointId x) -> const SimplexPoint& { return g.at(x); });
  if (disjoint(simplex::carrier_vertices(f), simplex::carrier_vertices(g))) {
    if (!M)
      M = std::max(simplex::star_preimage_diameters(space, f).max,
                   simplex::star_preimage_diameters(space, g).max);
    else if (opts.input == InputCheck::verify) {
      require_cobounded(space, f, *M, "f");
      require_cobounded(space, g, *M, "g");
    }
    ext.bound = *M + 2.0 * r + 2.0;
  }
  post_verify(space, ext, eps, opts);
  return ext;
}

Extension extend_pou(const FiniteMetricSpace& space, const PartitionOfUnity& f, double eps,
                     const Modulus& modulus, VertexMinter& minter, const ExtendOptions& opts,
                     std::optional<PointSubset> target) {
  require_same_space(space, f);
  if (!(eps > 0.0)) throw Error(Errc::BadEpsilon, "epsilon must be positive");
  const PointSubset T = target ? *target : PointSubset::all(space.size());
  metric::check_subset(space, T);
  const auto A = f.domain();
  if (A.empty()) throw Error(Errc::EmptySubset, "extend_pou needs f on a nonempty set");
  if (!A.is_subset_of(T)) throw Error(Errc::BadParams, "target must contain the domain of f");
  if (opts.input == InputCheck::verify) require_lipschitz(space, f, modulus(eps), opts, "f");

  Extension ext;
  if (A.size() == T.size()) {
    ext.pou = f;
  } else {
    const auto v = SimplexPoint::vertex(minter.fresh_vertex());
    ext.pou = blend(space, f, T, 8.0 / eps, [&](PointId) -> const SimplexPoint& { return v; });
  }
  post_verify(space, ext, eps, opts);
  return ext;
}

Extension extend_pou_cobounded(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                               double K, const PartitionOfUnity& u, double Q, double eps,
                               const Modulus& modulus, VertexMinter& minter,
                               const ExtendOptions& opts) {
  require_same_space(space, f);
  require_same_space(space, u);
  if (opts.input == InputCheck::verify) {
    require_cobounded(space, f, K, "f");
    require_cobounded(space, u, Q, "u");
  }
  if (f.domain_size() == space.size()) {
    Extension ext;
    ext.pou = f;
    ext.bound = K;
    post_verify(space, ext, eps, opts);
    return ext;
  }
  const auto renamed = simplex::renamespace(u, minter.fresh_namespace());
  const double r = 8.0 / eps;
  return paste(space, f, renamed, r, eps, modulus(eps), std::max(K, Q), opts);
}

PieceExtension extend_over_bounded_piece(const FiniteMetricSpace& space,
                                         const PartitionOfUnity& f, double R,
                                         const PointSubset& U, double K, double R_m, double u,
                                         const Modulus& modulus, VertexMinter& minter,
                                         const ExtendOptions& opts) {
  require_same_space(space, f);
  if (U.empty()) throw Error(Errc::EmptySubset, "the bounded piece is empty");
  metric::check_subset(space, U);
  if (!(R_m > 0.0)) throw Error(Errc::BadParams, "R_m must be positive");
  if (!at_most(2.0 / (R_m + 1.0), u))
    throw Error(Errc::PreconditionViolated, "budget " + num(u) + " is below 2/(R_m+1) = " +
                                                num(2.0 / (R_m + 1.0)));
  const auto A = f.domain();
  if (opts.input == InputCheck::verify) {
    const double d = metric::diameter(space, U);
    if (d > K) throw Error(Errc::PreconditionViolated, "piece diameter " + num(d) + " exceeds K");
    if (!A.empty()) {
      require_lipschitz(space, f, modulus(u), opts, "f");
      require_cobounded(space, f, R, "f");
    }
  }

  PieceExtension out;
  PointSubset near;
  if (!A.empty() && std::isfinite(R_m))
    near = metric::set_intersection(A, metric::set_ball(space, U, R_m));
  if (near.empty()) {
    out.branch = 1;
    out.ext.pou = f;
    const auto v = SimplexPoint::vertex(minter.fresh_vertex());
    for (PointId x : U) out.ext.pou.set(x, v);
    out.ext.bound = (A.empty() ? 0.0 : R) + K;
  } else {
    out.branch = 2;
    const PointSubset AU = metric::set_union(A, U);
    ExtendOptions inner = opts;
    inner.input = InputCheck::assume;
    inner.post_verify = false;
    const auto g = extend_pou(space, f, u, modulus, minter, inner, AU).pou;
    const PointSubset region = metric::set_intersection(metric::set_ball(space, U, R_m), AU);
    const auto S1 = simplex::carrier_vertices(f, near);
    const auto S2 = simplex::carrier_vertices(g, region);
    simplex::VertexMap r;
    for (const auto& v : S1) r.emplace(v, v);
    for (const auto& v : S2) r.emplace(v, S1.front());
    out.ext.pou = simplex::simplicial_retraction(g, r, region);
    out.ext.bound = R + K + R_m;
  }
  post_verify(space, out.ext, u, opts);
  return out;
}

FamilyExtension extend_over_disjoint_family(const FiniteMetricSpace& space,
                                            const PartitionOfUnity& g, double K_B,
                                            const std::vector<PointSubset>& family, double R,
                                            double u, const Modulus& modulus,
                                            VertexMinter& minter, const ExtendOptions& opts,
                                            PieceExtender extender, BudgetGate gate) {
  require_same_space(space, g);
  FamilyExtension out;
  out.margin = u - 2.0 / (R + 1.0);
  if (family.empty()) {
    out.ext.pou = g;
    out.ext.bound = K_B;
    post_verify(space, out.ext, u, opts);
    return out;
  }
  verify::CoverFamily cf;
  cf.members = family;
  const auto dis = verify::r_disjoint_check(space, cf, R);
  if (!dis.pass)
    throw Error(Errc::NotRDisjoint, "members " + std::to_string(dis.witness_members->first) +
                                        " and " + std::to_string(dis.witness_members->second) +
                                        " meet at points " + std::to_string(dis.witness->x) +
                                        ", " + std::to_string(dis.witness->y) + " (distance " +
                                        num(dis.witness->distance) + ")");
  if (gate == BudgetGate::enforce && !at_most(2.0 / (R + 1.0), u))
    throw Error(Errc::BudgetTooSmall, "budget " + num(u) + " is below 2/(R+1) = " +
                                          num(2.0 / (R + 1.0)));
  if (!extender) {
    ExtendOptions inner = opts;
    inner.input = InputCheck::assume;
    inner.post_verify = false;
    extender = [&, inner](const PartitionOfUnity& base, double, const PointSubset& W,
                          std::size_t) {
      return extend_pou(space, base, u, modulus, minter, inner,
                        metric::set_union(base.domain(), W));
    };
  }

  const auto D = g.domain();
  const auto old_carrier = simplex::carrier_vertices(g);
  std::vector<VertexId> minted;  // new vertices so far, sorted
  out.ext.pou = g;
  double worst = 0.0;
  bool bounded = true;
  for (std::size_t t = 0; t < family.size(); ++t) {
    const Extension piece = extender(g, K_B, family[t], t);
    const PointSubset fresh_part = metric::set_difference(family[t], D);
    if (!(piece.pou.domain() == metric::set_union(D, family[t])))
      throw std::logic_error("piece extension has the wrong domain");
    std::vector<VertexId> fresh;
    const auto carrier = simplex::carrier_vertices(piece.pou, fresh_part);
    std::set_difference(carrier.begin(), carrier.end(), old_carrier.begin(), old_carrier.end(),
                        std::back_inserter(fresh));
    if (!disjoint(fresh, minted))
      throw std::logic_error("pieces of one family share a new vertex");
    std::vector<VertexId> merged;
    std::merge(minted.begin(), minted.end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged));
    minted = std::move(merged);
    for (PointId x : fresh_part) out.ext.pou.set(x, piece.pou.at(x));
    if (piece.bound)
      worst = std::max(worst, *piece.bound);
    else
      bounded = false;
  }
  if (bounded) out.ext.bound = 2.0 * worst + K_B;
  post_verify(space, out.ext, u, opts);
  return out;
}

}  // namespace coarse::extend
