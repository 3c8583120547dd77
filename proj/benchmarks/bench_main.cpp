#include <benchmark/benchmark.h>

#include "coarse/extend.hpp"
#include "coarse/generators.hpp"
#include "coarse/simplex.hpp"
#include "coarse/verify.hpp"

using namespace coarse;

namespace {

simplex::PartitionOfUnity window_pou(std::size_t n, std::size_t w) {
  simplex::PartitionOfUnity f(n);
  for (metric::PointId x = 0; x < n; ++x) {
    std::vector<std::pair<simplex::VertexId, double>> e;
    const double t = double(x % w) / double(w);
    const auto b = static_cast<std::uint32_t>(x / w);
    if (t == 0.0)
      e.push_back({{0, b}, 1.0});
    else
      e = {{{0, b}, 1.0 - t}, {{0, b + 1}, t}};
    f.set(x, simplex::SimplexPoint::from_weights(e));
  }
  return f;
}

void BM_l1_distance(benchmark::State& state) {
  const auto k = static_cast<std::uint32_t>(state.range(0));
  std::vector<std::pair<simplex::VertexId, double>> a, b;
  for (std::uint32_t i = 0; i < k; ++i) {
    a.push_back({{0, 2 * i}, 1.0 / k});
    b.push_back({{0, 3 * i}, 1.0 / k});
  }
  const auto u = simplex::SimplexPoint::from_weights(a);
  const auto v = simplex::SimplexPoint::from_weights(b);
  for (auto _ : state) benchmark::DoNotOptimize(simplex::l1_distance(u, v));
}
BENCHMARK(BM_l1_distance)->Arg(2)->Arg(8)->Arg(64);

void BM_lipschitz_restricted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = metric::path_space(n);
  const auto f = window_pou(n, 40);
  for (auto _ : state)
    benchmark::DoNotOptimize(verify::lipschitz_check(p, f, 0.5, 0.5));
}
BENCHMARK(BM_lipschitz_restricted)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_paste(benchmark::State& state) {
  const std::size_t n = 400;
  const auto p = metric::path_space(n);
  const auto g = window_pou(n, 80);
  simplex::PartitionOfUnity f(n);
  for (metric::PointId x = 0; x < 20; ++x) f.set(x, simplex::SimplexPoint::vertex({1, 999}));
  extend::ExtendOptions opts;
  opts.input = extend::InputCheck::assume;
  opts.post_verify = false;
  const double eps = 1.0, r = 4.0, delta = eps / (4 * r + 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(extend::paste(p, f, g, r, eps, delta, 1.0, opts));
}
BENCHMARK(BM_paste)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
