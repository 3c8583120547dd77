#include <doctest.h>

#include <set>

#include "coarse/covers.hpp"
#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "support/oracles.hpp"

using namespace coarse;
using namespace coarse::covers;
using namespace coarse::metric;
using namespace coarse::verify;

namespace {

template <typename F>
Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::BadParams;
}

std::vector<PointId> ids(const PointSubset& s) { return {s.begin(), s.end()}; }

// Independent checks: every family R-disjoint and bounded, union = X.
void check_families(const FiniteMetricSpace& space, const std::vector<CoverFamily>& fams,
                    double R, double bound) {
  std::vector<int> seen(space.size(), 0);
  for (const auto& f : fams) {
    for (std::size_t i = 0; i < f.members.size(); ++i) {
      const auto mi = ids(f.members[i]);
      CHECK(oracle::diameter(space, mi) <= bound);
      for (PointId x : mi) ++seen[x];
      for (std::size_t j = i + 1; j < f.members.size(); ++j)
        CHECK(oracle::set_distance(space, mi, ids(f.members[j])) > R);
    }
  }
  for (int s : seen) CHECK(s >= 1);
}

}  // namespace

TEST_CASE("greedy_decomposition") {
  const auto p100 = path_space(100);
  const auto fams = greedy_decomposition(p100, 2, 4);
  CHECK(fams.size() == 2);
  CHECK(ids(fams[0].members[0]) == std::vector<PointId>{0, 1, 2});
  CHECK(ids(fams[1].members[0]) == std::vector<PointId>{3, 4, 5});
  check_families(p100, fams, 2, 4);
  for (const auto& f : fams) {
    CHECK(r_disjoint_check(p100, f, 2).pass);
    CHECK(uniformly_bounded_check(p100, f).M <= 4);
  }

  const auto one = greedy_decomposition(p100, 0.5, 0.5);
  CHECK(one.size() == 1);
  CHECK(one[0].members.size() == 100);

  const auto g = grid_space(12, 10);
  const auto gf = greedy_decomposition(g, 3, 0.5);
  check_families(g, gf, 3, 0);

  const auto rg = random_geometric_space(150, 2.0, 5);
  for (double R : {1.0, 2.5, 4.0}) {
    const auto rf = greedy_decomposition(rg, R, 3.0);
    check_families(rg, rf, R, 3.0);
  }
}

TEST_CASE("prop33_transform on the P20 example") {
  const auto p20 = path_space(20);
  const CoverFamily l1{{PointSubset::interval(0, 3), PointSubset::interval(10, 13)}, {}, {}};
  const CoverFamily l2{{PointSubset::interval(4, 9), PointSubset::interval(14, 19)}, {}, {}};
  const auto out = prop33_transform(p20, {l1, l2}, 1.0);
  CHECK(lebesgue_check(p20, out, 1.0).pass);
  CHECK(multiplicity(p20, out).max <= 2);
  CHECK(uniformly_bounded_check(p20, out).M <= 5 + 2);
  // U' for level 2 drops nothing, so U* = closed 1-enlargements
  CHECK(ids(out.members[2]) == oracle::range(3, 10));
}

TEST_CASE("prop33_transform single level and errors") {
  // three clusters on a line, gaps of 4
  std::vector<std::vector<double>> coords;
  for (int x : oracle::range(0, 9)) coords.push_back({double(x)});
  for (int x : oracle::range(13, 19)) coords.push_back({double(x)});
  for (int x : oracle::range(23, 29)) coords.push_back({double(x)});
  const auto line = FiniteMetricSpace::from_points(coords, 1.0);
  const CoverFamily lvl{{PointSubset::interval(0, 9), PointSubset::interval(10, 16),
                         PointSubset::interval(17, 23)},
                        {}, {}};
  const auto out = prop33_transform(line, {lvl}, 1.0);
  CHECK(multiplicity(line, out).max == 1);
  CHECK(lebesgue_check(line, out, 1.0).pass);

  const auto p30 = path_space(30);
  CHECK(code_of([&] {
          prop33_transform(p30, {CoverFamily{{PointSubset::interval(0, 28)}, {}, {}}}, 1.0);
        }) == Errc::NotACover);
  CHECK(code_of([&] {
          prop33_transform(p30,
                           {CoverFamily{{PointSubset::interval(0, 14),
                                         PointSubset::interval(15, 29)},
                                        {}, {}}},
                           1.0);
        }) == Errc::NotTwoSDisjoint);
}

TEST_CASE("prop33_transform keeps points covered where the literal recipe would not") {
  // every point its own level: U \ B(earlier, s) would empty point 3
  const auto p4 = path_space(4);
  std::vector<CoverFamily> levels;
  for (PointId x = 0; x < 4; ++x) levels.push_back({{PointSubset{x}}, {}, {}});
  const auto out = prop33_transform(p4, levels, 2.0);
  CHECK(lebesgue_check(p4, out, 2.0).pass);
  CHECK(multiplicity(p4, out).max <= 4);
}

TEST_CASE("net_ball_levels feed prop33_transform") {
  const auto g = grid_space(10, 8);
  const auto levels = net_ball_levels(g, 2.0);
  for (const auto& l : levels) CHECK(l.members.size() == 1);
  const auto out = prop33_transform(g, levels, 1.0);
  CHECK(lebesgue_check(g, out, 1.0).pass);
  CHECK(multiplicity(g, out).max <= levels.size());
  CHECK(uniformly_bounded_check(g, out).M <= 4 + 2);
}

TEST_CASE("brick_tree on an interval") {
  const auto p100 = path_space(100);
  const auto t = brick_tree(p100, {10}, 11);
  CHECK(t.m == 2);
  CHECK(t.arity == std::vector<std::size_t>{2});
  const auto& root = t.root();
  REQUIRE(root.families.size() == 2);
  std::vector<std::vector<PointId>> a, b;
  for (auto c : root.families[0]) a.push_back(ids(t.node(c).members));
  for (auto c : root.families[1]) b.push_back(ids(t.node(c).members));
  CHECK(a.size() == 5);
  CHECK(a[0] == oracle::range(0, 10));
  CHECK(a[4] == oracle::range(88, 98));
  CHECK(b[0] == oracle::range(11, 21));
  CHECK(b[4] == std::vector<PointId>{99});
  const auto rep = tree_validate(p100, t);
  CHECK(rep.pass);
  CHECK(rep.K == 10);
  CHECK(rep.sfdc);
}

TEST_CASE("brick_tree radius threshold") {
  const auto p100 = path_space(100);
  auto t = brick_tree(p100, {10}, 11);
  t.radii = {11};
  CHECK(tree_validate(p100, t).pass);
  t.radii = {12};
  const auto rep = tree_validate(p100, t);
  CHECK(!rep.pass);
  CHECK(rep.clause == 2);
  CHECK(rep.witness_distance == 12.0);
  REQUIRE(rep.witness);
  CHECK(p100.distance(rep.witness->first, rep.witness->second) == 12.0);
}

TEST_CASE("brick_tree on grids and small spaces") {
  const auto g = grid_space(20, 20);
  const auto t = brick_tree(g, {3}, 8);
  CHECK(t.root().families.size() == 3);
  CHECK(tree_validate(g, t).pass);
  CHECK(!tree_validate(g, t).sfdc);

  const auto small = brick_tree(path_space(8), {3}, 10);
  CHECK(small.m == 1);
  CHECK(tree_validate(path_space(8), small).pass);

  CHECK(code_of([] { brick_tree(path_space(50), {10}, 10); }) == Errc::ScaleTooSmall);
  CHECK(code_of([] { brick_tree(tree_graph_space(30, 2), {1}, 4); }) == Errc::NotAGrid);
}

TEST_CASE("detect_grid") {
  CHECK(detect_grid(path_space(7)).width == 7);
  const auto s = detect_grid(grid_space(6, 4));
  CHECK(s.width == 6);
  CHECK(s.height == 4);
  CHECK(code_of([] { detect_grid(cycle_space(6)); }) == Errc::NotAGrid);
}

TEST_CASE("tree_validate clauses") {
  const auto p10 = path_space(10);
  DecompositionTree t;
  t.m = 2;
  t.arity = {2};
  t.radii = {5};
  t.nodes = {{0, 1, PointSubset::all(10), {{1, 3}, {2}}},
             {1, 2, PointSubset::interval(0, 2), {}},
             {2, 2, PointSubset::interval(3, 6), {}},
             {3, 2, PointSubset::interval(7, 9), {}}};
  const auto close = tree_validate(p10, t);  // d(2, 7) = 5 is not > 5
  CHECK(close.clause == 2);
  CHECK(close.witness_distance == 5.0);
  t.radii = {4};
  const auto ok = tree_validate(p10, t);
  CHECK(ok.pass);
  CHECK(ok.K == 3);

  auto bad_root = t;
  bad_root.nodes[0].members = PointSubset::interval(0, 8);
  CHECK(tree_validate(p10, bad_root).clause == 1);

  auto too_many = t;
  too_many.arity = {1};
  CHECK(tree_validate(p10, too_many).clause == 2);

  auto hole = t;
  hole.nodes[2].members = PointSubset::interval(3, 5);
  CHECK(tree_validate(p10, hole).clause == 2);

  auto orphan = t;
  orphan.nodes.push_back({4, 2, PointSubset{5}, {}});
  CHECK(tree_validate(p10, orphan).clause == 0);

  DecompositionTree single;
  single.nodes = {{0, 1, PointSubset::all(10), {}}};
  const auto s = tree_validate(p10, single);
  CHECK(s.pass);
  CHECK(s.K == 9);
}

TEST_CASE("truncate_at_bounded_level") {
  const auto p64 = path_space(64);
  const auto t = interval_hierarchy(p64, {3, 1}, {16, 4});
  CHECK(t.m == 3);
  CHECK(tree_validate(p64, t).pass);
  const auto cut = truncate_at_bounded_level(p64, t, 15);
  CHECK(cut.m == 2);
  CHECK(tree_validate(p64, cut).pass);
  CHECK(tree_validate(p64, cut).K == 15);
  CHECK(truncate_at_bounded_level(p64, t, 3).m == 3);
  CHECK(code_of([&] { truncate_at_bounded_level(p64, t, 2); }) == Errc::BadTree);
}
