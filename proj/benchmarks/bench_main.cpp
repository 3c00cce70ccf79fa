#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>

#include "cdnsim/assignment.hpp"
#include "cdnsim/cache.hpp"
#include "cdnsim/graphml.hpp"
#include "cdnsim/io.hpp"
#include "cdnsim/pareto.hpp"
#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"
#include "cdnsim/rng.hpp"
#include "cdnsim/simulation.hpp"

using namespace cdnsim;

namespace {

struct Backbone {
  std::shared_ptr<const Topology> topo;
  std::shared_ptr<const DistanceMatrix> dm;
  std::vector<UserGroup> users;
};

const Backbone& backbone() {
  static const Backbone b = [] {
    Backbone x;
    const auto doc = read_file(std::string(CDNSIM_BENCH_DATA) + "/backbone_124.graphml");
    x.topo = std::make_shared<const Topology>(parse_graphml(doc, {"LinkWeight", ""}).topology);
    x.dm = std::make_shared<const DistanceMatrix>(all_pairs_shortest_paths(*x.topo));
    x.users = make_zipf_users(*x.topo, {0.3, 100, 15}, 1);
    return x;
  }();
  return b;
}

void BM_Dragoon(benchmark::State& state) {
  const auto& b = backbone();
  const auto k = std::size_t(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dragoon(*b.dm, *b.topo, b.users, k));
}
BENCHMARK(BM_Dragoon)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Spearman(benchmark::State& state) {
  const auto u = zipf_universe(std::size_t(state.range(0)));
  const auto size = std::min<std::size_t>(u->size(), 15);
  const auto p = generate_profile({0.3, u->size(), size}, u, 1);
  const auto q = generate_profile({0.3, u->size(), size}, u, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spearman(p, q));
}
BENCHMARK(BM_Spearman)->Arg(3)->Arg(100)->Arg(1000);

void BM_CacheReplay(benchmark::State& state) {
  const auto kind = CachePolicyKind(state.range(0));
  const auto pmf = zipf_pmf(0.8, 1000);
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
  Rng rng(7);
  std::vector<ItemId> trace;
  for (int i = 0; i < 100000; ++i)
    trace.push_back(ItemId(std::min<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), rng.uniform01()) - cdf.begin(), 999)));
  for (auto _ : state) benchmark::DoNotOptimize(replay(trace, {50, kind}));
  state.SetLabel(std::string(to_string(kind)));
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(trace.size()));
}
BENCHMARK(BM_CacheReplay)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const auto& b = backbone();
  for (auto _ : state) {
    const auto placed = dragoon(*b.dm, *b.topo, b.users, 10);
    const auto a0 = closest_assignment(*b.dm, b.users, placed.placement);
    const auto greedy = greedy_correlation(*b.dm, b.users, placed.placement, a0);
    const auto moved = relocate_servers(*b.dm, b.users, placed.placement, greedy.assignment);
    Scenario s;
    s.topology = b.topo;
    s.distances = b.dm;
    s.users = b.users;
    s.placement = moved.placement;
    s.assignment = moved.assignment;
    s.origin = default_origin(*b.dm, b.users);
    benchmark::DoNotOptimize(run(s));
    FrontOptions opts;
    opts.steps = 50;
    benchmark::DoNotOptimize(front_sweep(s, 10, opts));
  }
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

}  // namespace

// benchmark_main.a ships as LTO bytecode from another gcc; provide main here.
BENCHMARK_MAIN();
