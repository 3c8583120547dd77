// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, except those named with
// --known-unattainable, which are still run and printed but must FAIL (an
// unexpected pass is reported as an error so the list never goes stale).

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "coarse/covers.hpp"
#include "coarse/extend.hpp"
#include "coarse/generators.hpp"
#include "coarse/io.hpp"
#include "coarse/verify.hpp"
#include "support/oracles.hpp"

using namespace coarse;
using metric::FiniteMetricSpace;
using metric::PointId;
using metric::PointSubset;
using metric::SeededRng;
using simplex::PartitionOfUnity;
namespace fs = std::filesystem;

using Arity = std::vector<std::size_t>;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::ostringstream out, e;
  const int code = cli::run_cli(args, out, e);
  if (err) *err = e.str();
  return code;
}

verify::LipschitzOptions full_mode() {
  return {verify::LipschitzMode::full, verify::PairGather::automatic, {}};
}

// Budget from the paper's constants, written out independently.
double paper_delta(double eps) { return eps * eps / (32.0 + 7.0 * eps); }

// Hat partitions measured from the path's two ends, so every star preimage
// is an interval of length at most 2w.
PartitionOfUnity end_hats(const FiniteMetricSpace& p, const std::vector<PointId>& on, double delta,
                          SeededRng& rng, std::uint32_t ns) {
  const auto last = static_cast<PointId>(p.size() - 1);
  const double w1 = 2.0 / delta * rng.uniform(1.0, 1.5);
  const double w2 = 2.0 / delta * rng.uniform(1.0, 1.5);
  const auto f1 = oracle::hat_pou(p, on, 0, w1, rng.uniform(0.0, w1), ns, 0);
  const auto f2 = oracle::hat_pou(p, on, last, w2, rng.uniform(0.0, w2), ns, 1000);
  const double t = rng.uniform(0.0, 1.0);
  PartitionOfUnity f(p.size());
  for (PointId x : on) f.set(x, simplex::convex_combine(t, f1.at(x), f2.at(x)));
  return f;
}

// ------------------------------------------------------------ scenarios

struct Scenario1 {
  fs::path dir;
  int code_w1 = -1, code_w4 = -1;
  double seconds = 0.0;
  std::string err;
};

Scenario1 run_scenario1(const fs::path& dir) {
  Scenario1 s;
  s.dir = dir;
  const auto space = (dir / "p2000.json").string();
  const auto tree = (dir / "tree.json").string();
  cli({"generate", "path", "--n", "2000", "--out", space});
  cli({"decompose", "bricks", "--space", space, "--R", "159", "--block", "200", "--out", tree});
  auto certify = [&](const std::string& workers, const std::string& out) {
    return cli({"certify", "--space", space, "--tree", tree, "--epsilon", "0.2", "--modulus",
                "linear:4", "--schedule", "conservative", "--mode", "restricted", "--workers",
                workers, "--out", (dir / out).string()},
               &s.err);
  };
  const auto t0 = std::chrono::steady_clock::now();
  s.code_w1 = certify("1", "w1");
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.code_w4 = certify("4", "w4");
  return s;
}

struct Instance {
  FiniteMetricSpace space;
  PartitionOfUnity out;
  double eps = 0.0;
  std::optional<double> bound;  // claimed coboundedness, if any
};

// ------------------------------------------------------------ criteria

Outcome criterion1(const Scenario1& s) {
  if (s.code_w1 != 0) return {false, "certify exited " + std::to_string(s.code_w1) + ": " + s.err};
  const auto rep = io::read_json_file((s.dir / "w1" / "report.json").string());
  const auto& lip = rep["checks"][0];
  const double slack = lip["worst_slack"];
  const std::size_t b1 = rep["stats"]["branch1"], b2 = rep["stats"]["branch2"];
  const bool pass = rep["pass"] == true && lip["mode"] == "restricted" && slack >= -kTol &&
                    b1 > 0 && b2 > 0 && s.seconds < 60.0;
  return {pass, "exit 0, slack " + fmt("%.6g", slack) + ", branches " + std::to_string(b1) + "/" +
                    std::to_string(b2) + ", bound " + fmt("%g", double(rep["bound"])) + ", " +
                    fmt("%.1f s", s.seconds)};
}

Outcome criterion2(std::vector<Instance>& kept) {
  const auto p = metric::path_space(100);
  const auto modulus = extend::default_modulus();
  extend::ExtendOptions opts;
  opts.verify_mode = verify::LipschitzMode::full;
  std::string detail;
  bool all = true;
  for (double eps : {0.5, 1.0}) {
    const double delta = paper_delta(eps);
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      SeededRng rng(seed * 7919 + static_cast<std::uint64_t>(eps * 10));
      const auto A = oracle::random_subset(100, 5 + rng.below(56), rng);
      const auto f = oracle::random_lipschitz_pou(p, A, delta, rng, 0);
      if (oracle::lipschitz(p, f, delta, delta).slack < -kTol) continue;  // bad generator
      simplex::VertexMinter minter;
      const auto g = extend::extend_pou(p, f, eps, modulus, minter, opts);
      const bool lib = g.lipschitz && g.lipschitz->pass &&
                       g.lipschitz->mode == verify::LipschitzMode::full;
      const bool ref = oracle::lipschitz(p, g.pou, eps, eps).slack >= -kTol;
      if (lib && ref) ++ok;
      kept.push_back({p, g.pou, eps, std::nullopt});
    }
    all = all && ok == 100;
    detail += (detail.empty() ? "" : ", ") + fmt("eps %g: ", eps) + std::to_string(ok) + "/100";
  }
  return {all, detail + " (delta = " + fmt("1/%.0f", 1.0 / paper_delta(1.0)) + " at eps 1)"};
}

Outcome criterion3(std::vector<Instance>& kept) {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SeededRng rng(seed * 104729);
    const std::size_t n = 400 + rng.below(201);
    const auto p = metric::path_space(n);
    const double eps = seed % 2 ? 1.0 : 1.5;
    const double r = 4.0 / eps * rng.uniform(1.0, 2.0);
    const double delta = std::min(eps / 3 - 2 / (3 * r), eps / (4 * r + 7));
    std::vector<PointId> A;
    if (seed % 3 == 0) {
      A = oracle::random_subset(n, 10 + rng.below(n / 2), rng);
    } else {
      const auto a = static_cast<PointId>(rng.below(n - 50));
      A = oracle::range(a, static_cast<PointId>(std::min<std::size_t>(n - 1, a + 20 + rng.below(200))));
    }
    const auto f = end_hats(p, A, delta, rng, 0);
    const auto g = end_hats(p, oracle::range(0, static_cast<PointId>(n - 1)), delta, rng, 1);
    const double M = std::max(oracle::tight_bound(p, f), oracle::tight_bound(p, g));
    extend::ExtendOptions opts;
    opts.verify_mode = verify::LipschitzMode::full;
    const auto h = extend::paste(p, f, g, r, eps, delta, M, opts);
    const double claimed = M + 2 * r + 2;
    const bool lip = oracle::lipschitz(p, h.pou, eps, eps).slack >= -kTol && h.lipschitz->pass;
    const bool cob = oracle::tight_bound(p, h.pou) <= claimed + kTol;
    if (lip && cob) ++ok;
    kept.push_back({p, h.pou, eps, claimed});
  }
  return {ok == 100, std::to_string(ok) + "/100 pass (eps, eps) and M + 2r + 2"};
}

Outcome criterion4() {
  SeededRng rng(2024);
  const FiniteMetricSpace spaces[] = {metric::path_space(200), metric::grid_space(20, 20)};
  int agree = 0, total = 0, passing = 0;
  for (const auto& s : spaces)
    for (int i = 0; i < 50; ++i) {
      const auto f = i % 2 ? oracle::random_pou(s.size(), 3 + rng.below(10), rng)
                           : oracle::random_lipschitz_pou(
                                 s, oracle::range(0, static_cast<PointId>(s.size() - 1)),
                                 rng.uniform(0.1, 1.0), rng, 0);
      for (double eps : {0.1, 0.5, 1.0}) {
        ++total;
        const auto res = verify::lipschitz_check(s, f, eps, eps);
        const auto full = verify::lipschitz_check(s, f, eps, eps, full_mode());
        const auto ref = oracle::lipschitz(s, f, eps, eps, 2.0 / eps - 1.0);
        const bool same_slack = ref.pairs == 0 ? res.pairs_checked == 0
                                               : std::abs(res.worst_slack - ref.slack) <= 1e-12;
        const bool full_consistent = full.worst_slack <= res.worst_slack + 1e-12;
        if (res.pass == full.pass && same_slack && full_consistent) ++agree;
        passing += res.pass;
      }
    }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) +
                              " agree (" + std::to_string(passing) + " passing, " +
                              std::to_string(total - passing) + " failing)"};
}

Outcome criterion5() {
  struct Case {
    FiniteMetricSpace space;
    std::vector<verify::CoverFamily> levels;
    double s;
  };
  std::vector<Case> cases;
  {
    const auto p20 = metric::path_space(20);
    cases.push_back({p20,
                     {{{PointSubset::interval(0, 3), PointSubset::interval(10, 13)}, {}, {}},
                      {{PointSubset::interval(4, 9), PointSubset::interval(14, 19)}, {}, {}}},
                     1.0});
  }
  SeededRng rng(33);
  for (int i = 0; i < 20; ++i) {
    FiniteMetricSpace space = i % 3 == 0   ? metric::path_space(30 + rng.below(51))
                              : i % 3 == 1 ? metric::grid_space(6 + rng.below(7), 6 + rng.below(7))
                                           : metric::random_geometric_space(
                                                 60 + rng.below(61), 2.0, 100 + i);
    const double s = i % 3 == 2 ? 1.5 : double(1 + rng.below(2));
    auto levels = i % 2 ? covers::net_ball_levels(space, s * rng.uniform(1.0, 2.0))
                        : covers::greedy_decomposition(space, 2 * s, 2 * s + rng.uniform(0, 4));
    cases.push_back({space, std::move(levels), s});
  }
  int ok = 0;
  for (const auto& c : cases) {
    double in_bound = 0;
    for (const auto& l : c.levels)
      in_bound = std::max(in_bound, verify::uniformly_bounded_check(c.space, l).M);
    const auto out = covers::prop33_transform(c.space, c.levels, c.s);
    const bool leb = verify::lebesgue_check(c.space, out, c.s).pass;
    const bool mult = verify::multiplicity(c.space, out).max <= c.levels.size();
    const bool bnd = verify::uniformly_bounded_check(c.space, out).M <= in_bound + 2 * c.s;
    if (leb && mult && bnd) ++ok;
  }
  return {ok == int(cases.size()),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " instances"};
}

Outcome criterion6() {
  struct Brick {
    FiniteMetricSpace space;
    double R, L;
    std::size_t families;
  };
  const std::vector<Brick> bricks{
      {metric::path_space(100), 10, 11, 2},     {metric::path_space(77), 5, 9, 2},
      {metric::path_space(500), 30, 45, 2},     {metric::path_space(2000), 159, 200, 2},
      {metric::grid_space(20, 20), 3, 8, 3},    {metric::grid_space(30, 25), 4, 12, 3},
      {metric::grid_space(41, 17), 5, 14, 3},   {metric::grid_space(60, 60), 10, 24, 3}};
  int ok = 0;
  std::string shapes;
  for (const auto& b : bricks) {
    const auto t = covers::brick_tree(b.space, {b.R}, b.L);
    const auto& root = t.root();
    bool good = root.families.size() == b.families;
    const bool two_d = b.families == 3;
    for (const auto& fam : root.families) {
      verify::CoverFamily cf;
      for (auto c : fam) cf.members.push_back(t.node(c).members);
      good = good && verify::r_disjoint_check(b.space, cf, b.R).pass;
      good = good && verify::uniformly_bounded_check(b.space, cf).M <=
                         (two_d ? 2 * (b.L - 1) : b.L - 1);
    }
    ok += good;
    shapes += std::to_string(root.families.size());
  }
  const auto greedy = covers::greedy_decomposition(metric::path_space(100), 2, 4);
  const bool g = greedy.size() == 2;
  return {ok == int(bricks.size()) && g, "brick families " + shapes + ", " + std::to_string(ok) +
                                             "/" + std::to_string(bricks.size()) +
                                             " checked; greedy P100 " +
                                             std::to_string(greedy.size()) + " families"};
}

Outcome criterion7() {
  const auto P = extend::default_modulus();
  const auto s = extend::budget_schedule(Arity{2, 3}, 1.0, P, extend::ScheduleMode::paper);
  const bool np = s.N == std::vector<std::uint64_t>{0, 2, 6} &&
                  s.P == std::vector<std::uint64_t>{6, 3, 1};
  // E(p/q) = p^2 / (q (32 q + 7 p)) in integers
  const long long p1 = 1, q1 = 39;  // E(1) = 1 / (32 + 7)
  const bool e1 = P(1.0) == double(p1) / double(q1) && 32 + 7 == q1;
  const long long p2 = p1 * p1, q2 = q1 * (32 * q1 + 7 * p1);  // 1 / 48945
  const double e2 = P.compose(1.0, 2).to_double();
  const bool e2ok = std::abs(e2 - double(p2) / double(q2)) <= 1e-12;
  const auto two = extend::budget_schedule(Arity{2}, 1.0, P, extend::ScheduleMode::paper);
  const double R2 = 2.0 * double(q2) / double(p2) - 1.0;
  const bool r2 = two.R.size() == 2 && std::abs(two.R[1] - R2) <= 1e-9;
  return {np && e1 && e2ok && r2, "N=(0,2,6) P=(6,3,1) " + std::string(np ? "ok" : "WRONG") +
                                      ", E(1)=1/39 " + (e1 ? "ok" : "WRONG") +
                                      ", E^2(1)=" + fmt("%.6e", e2) + " vs 1/" +
                                      std::to_string(q2) + ", R_2=" + fmt("%.10g", two.R[1])};
}

// A certificate counts as flipped when some single perturbation among the
// candidate points breaks one of its claims.
bool flips(const Instance& c, const std::vector<PointId>& candidates,
           verify::LipschitzMode mode) {
  for (PointId x : candidates) {
    const auto bent = oracle::perturb(c.space, c.out, x);
    const auto lip =
        verify::lipschitz_check(c.space, bent, c.eps, c.eps, {mode, {}, {}});
    if (!lip.pass) return true;
    if (c.bound && !verify::cobounded_check(c.space, bent, *c.bound).pass) return true;
  }
  return false;
}

std::vector<PointId> candidates(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<PointId> out{0, static_cast<PointId>(n - 1)};
  for (int i = 0; i < 6; ++i) out.push_back(static_cast<PointId>(rng.below(n)));
  return out;
}

Outcome criterion8(const Scenario1& s1, const std::vector<Instance>& s2,
                   const std::vector<Instance>& s3) {
  int f1 = 0, n1 = 0;
  if (s1.code_w1 == 0) {
    const auto space = io::space_from_json(io::read_json_file((s1.dir / "p2000.json").string()));
    const auto pou =
        io::pou_from_json(io::read_json_file((s1.dir / "w1" / "pou.json").string()), space.size());
    const double bound = io::read_json_file((s1.dir / "w1" / "report.json").string())["bound"];
    n1 = 1;
    f1 = flips({space, pou, 0.2, bound}, candidates(space.size(), 1),
               verify::LipschitzMode::restricted);
  }
  int f2 = 0, f3 = 0;
  for (std::size_t i = 0; i < s2.size(); ++i)
    f2 += flips(s2[i], candidates(s2[i].space.size(), 100 + i), verify::LipschitzMode::full);
  for (std::size_t i = 0; i < s3.size(); ++i)
    f3 += flips(s3[i], candidates(s3[i].space.size(), 500 + i), verify::LipschitzMode::full);
  const bool pass = n1 == 1 && f1 == n1 && f2 == int(s2.size()) && f3 == int(s3.size());
  return {pass, "flipped: scenario 1 " + std::to_string(f1) + "/" + std::to_string(n1) +
                    ", scenario 2 " + std::to_string(f2) + "/" + std::to_string(s2.size()) +
                    ", scenario 3 " + std::to_string(f3) + "/" + std::to_string(s3.size())};
}

Outcome criterion9(const Scenario1& s) {
  if (s.code_w1 != 0 || s.code_w4 != 0)
    return {false, "certify exit codes " + std::to_string(s.code_w1) + ", " +
                       std::to_string(s.code_w4)};
  bool same = true;
  std::string files;
  for (const char* f : {"pou.json", "report.json", "schedule.json"}) {
    const bool eq = slurp(s.dir / "w1" / f) == slurp(s.dir / "w4" / f);
    same = same && eq;
    files += std::string(files.empty() ? "" : ", ") + f + (eq ? " identical" : " DIFFER");
  }
  return {same, "workers 1 vs 4: " + files};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> known;
  std::string workdir;
  app.add_option("--known-unattainable", known, "criteria expected to fail");
  app.add_option("--workdir", workdir, "scratch directory");
  CLI11_PARSE(app, argc, argv);

  const fs::path dir = workdir.empty()
                           ? fs::temp_directory_path() / ("coarse_accept_" + std::to_string(::getpid()))
                           : fs::path(workdir);
  fs::create_directories(dir);

  const auto s1 = run_scenario1(dir);
  std::vector<Instance> s2, s3;
  std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [&] { return criterion1(s1); }},
      {2, [&] { return criterion2(s2); }},
      {3, [&] { return criterion3(s3); }},
      {4, [] { return criterion4(); }},
      {5, [] { return criterion5(); }},
      {6, [] { return criterion6(); }},
      {7, [] { return criterion7(); }},
      {8, [&] { return criterion8(s1, s2, s3); }},
      {9, [&] { return criterion9(s1); }},
  };

  const std::set<int> expected_fail(known.begin(), known.end());
  int passed = 0, problems = 0;
  for (auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    passed += o.pass;
    const bool known_bad = expected_fail.count(id) > 0;
    std::string note;
    if (known_bad && !o.pass) note = "  [known unattainable]";
    if (known_bad && o.pass) note = "  [listed as unattainable but passed]";
    if (o.pass == known_bad) ++problems;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << note << std::endl;
  }
  std::cout << passed << "/" << criteria.size() << " criteria pass" << std::endl;
  if (workdir.empty()) fs::remove_all(dir);
  return problems == 0 ? 0 : 1;
}
