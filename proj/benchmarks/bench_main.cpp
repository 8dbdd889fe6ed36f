#include <benchmark/benchmark.h>

#include <random>

#include "pla/dynamics.hpp"
#include "pla/graphs.hpp"
#include "pla/markov.hpp"
#include "pla/netform.hpp"
#include "pla/stability.hpp"

namespace {

pla::Game random_game(std::vector<std::size_t> counts, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.5, 9.5);
  std::size_t size = 1;
  for (auto c : counts) size *= c;
  pla::PayoffTable t{counts, std::vector<double>(size * counts.size())};
  for (auto& v : t.values) v = u(g);
  return pla::Game(std::move(t));
}

void BM_StepCoordination(benchmark::State& state) {
  const auto game = random_game({2, 2}, 1);
  pla::LearnerConfig config{0.005, 0.005, 7};
  pla::Rng rng(7);
  auto s = pla::uniform_state(game, rng);
  for (auto _ : state) {
    pla::advance(game, s, config, rng);
    benchmark::DoNotOptimize(s.profile.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepCoordination);

void BM_StepNetform6(benchmark::State& state) {
  const auto game = pla::make_netform_game(pla::Topology::ring(6), 0.5, 1.0);
  pla::LearnerConfig config{0.005, 0.005, 7};
  pla::Rng rng(7);
  auto s = pla::uniform_state(game, rng);
  for (auto _ : state) {
    pla::advance(game, s, config, rng);
    benchmark::DoNotOptimize(s.profile.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepNetform6);

void BM_MinResistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto game = random_game(std::vector<std::size_t>(n, 3), 3);
  const auto graph = pla::build_one_step_graph(game, 0.05);
  std::size_t root = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pla::min_resistance(graph, root));
    root = (root + 1) % graph.nodes();
  }
  state.SetLabel(std::to_string(graph.nodes()) + " states");
}
BENCHMARK(BM_MinResistance)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_StationaryWGraph(benchmark::State& state) {
  const auto game = random_game({3, 3}, 5);
  const auto m = pla::analytic_phat(pla::build_one_step_graph(game, 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(pla::stationary_from_graphs(m));
}
BENCHMARK(BM_StationaryWGraph);

void BM_StationarySolve(benchmark::State& state) {
  const auto game = random_game({3, 3}, 5);
  const auto m = pla::analytic_phat(pla::build_one_step_graph(game, 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(pla::stationary_solve(m));
}
BENCHMARK(BM_StationarySolve);

void BM_EstimatePhat(benchmark::State& state) {
  const auto game = random_game({2, 2}, 9);
  pla::PhatOptions options;
  options.epsilon = 0.05;
  options.trials = 200;
  for (auto _ : state) benchmark::DoNotOptimize(pla::estimate_phat(game, options));
}
BENCHMARK(BM_EstimatePhat)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
