#include "coarse/covers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "coarse/error.hpp"

namespace coarse::covers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// Smallest double strictly above v, so ball(x, above(R)) = {y : d <= R}.
double above(double v) { return std::nextafter(v, kInf); }

}  // namespace

// ---------------------------------------------------------------- greedy

std::vector<CoverFamily> greedy_decomposition(const FiniteMetricSpace& space, double R,
                                              double target_diam) {
  if (!(target_diam > 0.0)) throw Error(Errc::BadParams, "target diameter must be positive");
  if (!(R >= 0.0)) throw Error(Errc::BadParams, "R must be nonnegative");
  const std::size_t n = space.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(n, kNone);
  std::vector<std::vector<PointId>> pieces;
  for (std::size_t x = 0; x < n; ++x) {
    if (owner[x] != kNone) continue;
    std::vector<PointId> piece;
    for (const auto& nb : space.ball(static_cast<PointId>(x), above(target_diam / 2)))
      if (owner[nb.id] == kNone) {
        owner[nb.id] = pieces.size();
        piece.push_back(nb.id);
      }
    pieces.push_back(std::move(piece));
  }

  std::vector<std::set<std::size_t>> conflicts(pieces.size());
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& nb : space.ball(static_cast<PointId>(x), above(R)))
      if (owner[nb.id] != owner[x]) conflicts[owner[x]].insert(owner[nb.id]);

  std::vector<std::size_t> color(pieces.size());
  std::size_t colors = 0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::set<std::size_t> taken;
    for (std::size_t q : conflicts[p])
      if (q < p) taken.insert(color[q]);
    std::size_t c = 0;
    while (taken.count(c)) ++c;
    color[p] = c;
    colors = std::max(colors, c + 1);
  }

  std::vector<CoverFamily> out(colors);
  for (std::size_t p = 0; p < pieces.size(); ++p)
    out[color[p]].members.push_back(PointSubset::from_sorted(std::move(pieces[p])));
  for (auto& fam : out) {
    fam.claimed_R = R;
    fam.claimed_bound = target_diam;
    if (!verify::r_disjoint_check(space, fam, R).pass ||
        verify::uniformly_bounded_check(space, fam).M > target_diam)
      throw std::logic_error("greedy decomposition produced an invalid family");
  }
  return out;
}

// ---------------------------------------------------------------- prop 3.3

CoverFamily prop33_transform(const FiniteMetricSpace& space,
                             const std::vector<CoverFamily>& levels, double s) {
  if (!(s > 0.0)) throw Error(Errc::BadParams, "s must be positive");
  const std::size_t n = space.size();
  double input_bound = 0.0;
  std::vector<char> seen(n, 0);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto rep = verify::r_disjoint_check(space, levels[k], 2 * s);
    if (!rep.pass)
      throw Error(Errc::NotTwoSDisjoint,
                  "level " + std::to_string(k) + " has points " +
                      std::to_string(rep.witness->x) + " and " + std::to_string(rep.witness->y) +
                      " at distance " + num(rep.witness->distance) + " <= " + num(2 * s));
    input_bound = std::max(input_bound, verify::uniformly_bounded_check(space, levels[k]).M);
    for (const auto& m : levels[k].members)
      for (PointId x : m) seen[x] = 1;
  }
  for (std::size_t x = 0; x < n; ++x)
    if (!seen[x]) throw Error(Errc::NotACover, "point " + std::to_string(x) + " is not covered");

  CoverFamily out;
  std::vector<char> earlier(n, 0);
  for (const auto& level : levels) {
    for (const auto& U : level.members) {
      std::vector<PointId> kept;
      for (PointId x : U)
        if (!earlier[x]) kept.push_back(x);
      if (kept.empty()) continue;
      out.members.push_back(
          metric::closed_set_ball(space, PointSubset::from_sorted(std::move(kept)), s));
    }
    for (const auto& U : level.members)
      for (PointId x : U) earlier[x] = 1;
  }
  out.claimed_bound = input_bound + 2 * s;
  return out;
}

std::vector<CoverFamily> net_ball_levels(const FiniteMetricSpace& space, double r) {
  if (!(r > 0.0)) throw Error(Errc::BadParams, "net radius must be positive");
  std::vector<PointId> net;
  for (std::size_t x = 0; x < space.size(); ++x) {
    bool near = false;
    for (PointId s : net)
      if (space.distance(s, static_cast<PointId>(x)) <= r) {
        near = true;
        break;
      }
    if (!near) net.push_back(static_cast<PointId>(x));
  }
  std::vector<CoverFamily> levels;
  for (PointId s : net) {
    CoverFamily fam;
    fam.members.push_back(metric::closed_set_ball(space, PointSubset{s}, r));
    fam.claimed_bound = 2 * r;
    levels.push_back(std::move(fam));
  }
  return levels;
}

// ---------------------------------------------------------------- trees

const TreeNode& DecompositionTree::node(std::size_t id) const {
  for (const auto& nd : nodes)
    if (nd.id == id) return nd;
  throw Error(Errc::BadTree, "no node with id " + std::to_string(id));
}

const TreeNode& DecompositionTree::root() const {
  for (const auto& nd : nodes)
    if (nd.level == 1) return nd;
  throw Error(Errc::BadTree, "tree has no root");
}

namespace {

TreeReport fail(int clause, std::optional<std::size_t> node, std::string message) {
  TreeReport r;
  r.pass = false;
  r.clause = clause;
  r.node = node;
  r.message = std::move(message);
  return r;
}

}  // namespace

TreeReport tree_validate(const FiniteMetricSpace& space, const DecompositionTree& tree) {
  const std::size_t n = space.size();
  // clause 0: shape
  if (tree.m < 1) return fail(0, std::nullopt, "depth m must be at least 1");
  if (tree.arity.size() != tree.m - 1 || tree.radii.size() != tree.m - 1)
    return fail(0, std::nullopt, "arity and radii need m-1 entries each");
  std::map<std::size_t, const TreeNode*> by_id;
  std::size_t roots = 0;
  for (const auto& nd : tree.nodes) {
    if (!by_id.emplace(nd.id, &nd).second)
      return fail(0, nd.id, "node id " + std::to_string(nd.id) + " repeated");
    if (nd.level < 1 || nd.level > tree.m)
      return fail(0, nd.id, "node level " + std::to_string(nd.level) + " outside 1..m");
    if (nd.members.empty()) return fail(0, nd.id, "node has no members");
    if (nd.members.back() >= n) return fail(0, nd.id, "node member outside the space");
    roots += nd.level == 1;
  }
  if (roots != 1) return fail(0, std::nullopt, "tree needs exactly one level-1 node");
  std::set<std::size_t> referenced;
  for (const auto& nd : tree.nodes)
    for (const auto& fam : nd.families)
      for (std::size_t c : fam) {
        auto it = by_id.find(c);
        if (it == by_id.end())
          return fail(0, nd.id, "unknown child id " + std::to_string(c));
        if (it->second->level != nd.level + 1)
          return fail(0, nd.id, "child " + std::to_string(c) + " is not one level down");
        if (!referenced.insert(c).second)
          return fail(0, nd.id, "child " + std::to_string(c) + " referenced twice");
      }
  for (const auto& nd : tree.nodes)
    if (nd.level > 1 && !referenced.count(nd.id))
      return fail(0, nd.id, "node " + std::to_string(nd.id) + " has no parent");

  // clause 1
  const TreeNode& root = tree.root();
  if (root.members.size() != n) return fail(1, root.id, "root does not contain every point");

  // clause 2
  for (const auto& nd : tree.nodes) {
    if (nd.level == tree.m) continue;
    const std::size_t i = nd.level - 1;
    if (nd.families.size() > tree.arity[i])
      return fail(2, nd.id, std::to_string(nd.families.size()) + " families exceed arity " +
                                std::to_string(tree.arity[i]));
    PointSubset covered;
    for (const auto& fam : nd.families) {
      CoverFamily cf;
      for (std::size_t c : fam) {
        const auto& child = by_id.at(c)->members;
        if (!child.is_subset_of(nd.members))
          return fail(2, nd.id, "child " + std::to_string(c) + " leaves its parent");
        cf.members.push_back(child);
        covered = metric::set_union(covered, child);
      }
      const auto rep = verify::r_disjoint_check(space, cf, tree.radii[i]);
      if (!rep.pass) {
        auto r = fail(2, nd.id,
                      "family is not " + num(tree.radii[i]) + "-disjoint: points " +
                          std::to_string(rep.witness->x) + " and " +
                          std::to_string(rep.witness->y) + " at distance " +
                          num(rep.witness->distance));
        r.witness = std::make_pair(rep.witness->x, rep.witness->y);
        r.witness_distance = rep.witness->distance;
        return r;
      }
    }
    if (!(covered == nd.members)) {
      const auto missing = metric::set_difference(nd.members, covered);
      return fail(2, nd.id, "families miss point " + std::to_string(missing.front()));
    }
  }

  // clause 3
  TreeReport ok;
  for (const auto& nd : tree.nodes) {
    if (nd.level != tree.m) continue;
    if (!nd.families.empty()) return fail(3, nd.id, "level-m node has children");
    ok.K = std::max(ok.K, metric::diameter_of(space, nd.members.ids()));
  }
  ok.sfdc = std::all_of(tree.arity.begin(), tree.arity.end(), [](std::size_t a) { return a <= 2; });
  return ok;
}

DecompositionTree truncate_at_bounded_level(const FiniteMetricSpace& space,
                                            const DecompositionTree& tree, double K) {
  for (std::size_t level = 1; level <= tree.m; ++level) {
    bool bounded = true;
    for (const auto& nd : tree.nodes)
      if (nd.level == level && metric::diameter_of(space, nd.members.ids()) > K) {
        bounded = false;
        break;
      }
    if (!bounded) continue;
    DecompositionTree out;
    out.m = level;
    out.arity.assign(tree.arity.begin(), tree.arity.begin() + static_cast<std::ptrdiff_t>(level - 1));
    out.radii.assign(tree.radii.begin(), tree.radii.begin() + static_cast<std::ptrdiff_t>(level - 1));
    for (const auto& nd : tree.nodes) {
      if (nd.level > level) continue;
      TreeNode copy = nd;
      if (nd.level == level) copy.families.clear();
      out.nodes.push_back(std::move(copy));
    }
    return out;
  }
  throw Error(Errc::BadTree, "no level is bounded by " + num(K));
}

// ---------------------------------------------------------------- grids

GridShape detect_grid(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  if (n == 0) throw Error(Errc::NotAGrid, "empty space");
  auto fits = [&](std::size_t w) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double dx = std::abs(double(a % w) - double(b % w));
        const double dy = std::abs(double(a / w) - double(b / w));
        if (space.distance(static_cast<PointId>(a), static_cast<PointId>(b)) != dx + dy)
          return false;
      }
    return true;
  };
  if (fits(n)) return {n, 1};
  for (std::size_t w = 2; w * 2 <= n; ++w)
    if (n % w == 0 && fits(w)) return {w, n / w};
  throw Error(Errc::NotAGrid, "distances are neither a unit path nor a row-major l1 grid");
}

namespace {

DecompositionTree single_node(std::size_t n) {
  DecompositionTree t;
  t.m = 1;
  t.nodes.push_back({0, 1, PointSubset::all(n), {}});
  return t;
}

// Turns colored blocks into a depth-2 tree. Children are numbered in
// (color, first member) order.
DecompositionTree two_level(std::size_t n, double R,
                            std::vector<std::pair<std::size_t, std::vector<PointId>>> blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.first, a.second.front()) < std::tie(b.first, b.second.front());
            });
  DecompositionTree t;
  t.m = 2;
  t.radii = {R};
  TreeNode root{0, 1, PointSubset::all(n), {}};
  std::map<std::size_t, std::size_t> family_of_color;
  std::size_t next = 1;
  for (auto& [color, ids] : blocks) {
    auto [it, fresh] = family_of_color.emplace(color, root.families.size());
    if (fresh) root.families.emplace_back();
    root.families[it->second].push_back(next);
    t.nodes.push_back({next, 2, PointSubset::from_sorted(std::move(ids)), {}});
    ++next;
  }
  t.arity = {root.families.size()};
  t.nodes.insert(t.nodes.begin(), std::move(root));
  return t;
}

}  // namespace

DecompositionTree brick_tree(const FiniteMetricSpace& space, const std::vector<double>& radii,
                             double block_scale) {
  const auto shape = detect_grid(space);
  const std::size_t n = space.size();
  if (!(block_scale >= 1.0)) throw Error(Errc::BadParams, "block scale must be at least 1");
  const double diam = double(shape.width - 1) + double(shape.height - 1);
  if (diam <= block_scale) return single_node(n);
  if (radii.empty()) throw Error(Errc::BadParams, "brick tree needs a radius R_1");
  const double R = radii.front();
  const auto L = static_cast<std::size_t>(std::floor(block_scale));
  if (double(L) <= R)
    throw Error(Errc::ScaleTooSmall,
                "block scale " + num(block_scale) + " must exceed R_1 = " + num(R));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<PointId>> cells;  // (row band, brick)
  std::vector<std::pair<std::size_t, std::vector<PointId>>> blocks;
  if (shape.dims() == 1) {
    for (std::size_t x = 0; x < n; ++x) cells[{0, x / L}].push_back(static_cast<PointId>(x));
    for (auto& [key, ids] : cells) blocks.emplace_back(key.second % 2, std::move(ids));
  } else {
    const std::size_t h = L / 2;
    if (double(h + 2) <= R)
      throw Error(Errc::ScaleTooSmall, "half block " + std::to_string(h) +
                                           " + 2 must exceed R_1 = " + num(R));
    for (std::size_t id = 0; id < n; ++id) {
      const std::size_t x = id % shape.width, y = id / shape.width;
      const std::size_t band = y / L;
      cells[{band, (x + band * h) / L}].push_back(static_cast<PointId>(id));
    }
    for (auto& [key, ids] : cells) blocks.emplace_back((key.first + key.second) % 3, std::move(ids));
  }
  return two_level(n, R, std::move(blocks));
}

DecompositionTree interval_hierarchy(const FiniteMetricSpace& space,
                                     const std::vector<double>& radii,
                                     const std::vector<std::size_t>& scales) {
  const auto shape = detect_grid(space);
  if (shape.dims() != 1) throw Error(Errc::NotAGrid, "interval hierarchy needs a path");
  if (radii.size() != scales.size())
    throw Error(Errc::BadParams, "need one block scale per radius");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (double(scales[i]) <= radii[i])
      throw Error(Errc::ScaleTooSmall, "block scale " + std::to_string(scales[i]) +
                                           " must exceed R = " + num(radii[i]));
  DecompositionTree t;
  t.m = radii.size() + 1;
  t.radii = radii;
  t.arity.assign(radii.size(), 2);
  t.nodes.push_back({0, 1, PointSubset::all(space.size()), {}});
  std::vector<std::size_t> frontier{0};
  std::size_t next = 1;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<std::size_t> below;
    for (std::size_t parent : frontier) {
      // copy: push_back below may reallocate
      const PointSubset members = t.nodes[parent].members;
      const PointId lo = members.front(), hi = members.back();
      std::vector<std::vector<std::size_t>> fams(2);
      for (std::size_t j = 0; lo + j * scales[i] <= hi; ++j) {
        const PointId a = static_cast<PointId>(lo + j * scales[i]);
        const PointId b = static_cast<PointId>(std::min<std::size_t>(hi, a + scales[i] - 1));
        fams[j % 2].push_back(next);
        below.push_back(t.nodes.size());
        t.nodes.push_back({next++, i + 2, PointSubset::interval(a, b), {}});
      }
      if (fams[1].empty()) fams.pop_back();
      t.nodes[parent].families = std::move(fams);
    }
    frontier = std::move(below);
  }
  return t;
}

}  // namespace coarse::covers
