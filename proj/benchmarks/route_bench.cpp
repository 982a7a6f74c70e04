#include <benchmark/benchmark.h>

#include "crowdsense/generators.hpp"
#include "crowdsense/route_planner.hpp"

using namespace crowdsense;

static void BM_DistanceTable(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto grid = synth::gen_grid_network(side, side, 100, 10, 0.1, 1);
  const route::RoadGraph graph(grid.scored);
  for (auto _ : state) {
    const route::DistanceTable table(graph);
    benchmark::DoNotOptimize(table.distance(0, side * side - 1));
  }
}
BENCHMARK(BM_DistanceTable)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ShortestPath(benchmark::State& state) {
  const auto grid = synth::gen_grid_network(30, 30, 100, 10, 0.1, 1);
  const route::RoadGraph graph(grid.scored);
  for (auto _ : state) benchmark::DoNotOptimize(graph.shortest_path(0, 899));
}
BENCHMARK(BM_ShortestPath);

static void BM_PlanRoute(benchmark::State& state) {
  const auto grid = synth::gen_grid_network(20, 20, 100, 10, 0.1, 2);
  route::RouteQuery q;
  q.origin = grid.scored.network.node(grid.node_at(0, 0));
  q.destination = grid.scored.network.node(grid.node_at(19, 19));
  q.distmax = 1.5 * 3800;
  q.strategy = static_cast<route::Strategy>(state.range(0));
  q.trials = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(route::plan_route(q, grid.scored));
}
BENCHMARK(BM_PlanRoute)
    ->Args({static_cast<int>(route::Strategy::HfS), 1})
    ->Args({static_cast<int>(route::Strategy::PbS), 10})
    ->Args({static_cast<int>(route::Strategy::PbS), 50})
    ->Args({static_cast<int>(route::Strategy::RbS), 50})
    ->Unit(benchmark::kMillisecond);
