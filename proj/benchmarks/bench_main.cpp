#include <benchmark/benchmark.h>

#include "splaylab/lab.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/potential.hpp"
#include "splaylab/restricted.hpp"
#include "splaylab/sequences.hpp"
#include "splaylab/splay.hpp"

using namespace splaylab;

static void BM_SplayUniform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<Key> q = generate_sequence(parse_generator("uniform"), n, 4096, 1);
  for (auto _ : state) {
    Tree t = Tree::balanced(Tree::iota_keys(n));
    benchmark::DoNotOptimize(splay_cost(t, q));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q.size()));
}
BENCHMARK(BM_SplayUniform)->Arg(256)->Arg(4096)->Arg(65536);

static void BM_SequentialScan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Tree t = Tree::left_spine(Tree::iota_keys(n));
    benchmark::DoNotOptimize(splay_cost(t, Tree::iota_keys(n)));
  }
}
BENCHMARK(BM_SequentialScan)->Arg(1024)->Arg(16384);

static void BM_Phi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = substream(3, 0);
  const Tree T = random_tree(rng, Tree::iota_keys(n));
  const Tree S = random_tree(rng, Tree::iota_keys(n));
  for (auto _ : state) benchmark::DoNotOptimize(phi(S, T).phi);
}
BENCHMARK(BM_Phi)->Arg(64)->Arg(256)->Arg(1024);

static void BM_InterleavedSplay(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = substream(4, 0);
  InterleavedRun run(random_tree(rng, Tree::iota_keys(n)), random_tree(rng, Tree::iota_keys(n)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run.splay_S(static_cast<Key>(uniform_below(rng, n))).amortized());
  }
}
BENCHMARK(BM_InterleavedSplay)->Arg(64)->Arg(256);

static void BM_SimulateProgram(benchmark::State& state) {
  Tree T = Tree::balanced(Tree::iota_keys(255));
  MachineProgram prog;
  for (int i = 0; i < 7; ++i) prog.ops.push_back(move_left());
  for (int i = 0; i < 7; ++i) prog.ops.push_back(rotate());
  for (auto _ : state) benchmark::DoNotOptimize(simulate_program(T, prog).ledger.moves);
}
BENCHMARK(BM_SimulateProgram);

static void BM_Oracle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tree t = Tree::balanced(Tree::iota_keys(n));
  const std::vector<Key> q = generate_sequence(parse_generator("uniform"), n, 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(opt_cost(t, q).opt_cost);
}
BENCHMARK(BM_Oracle)->Arg(4)->Arg(5)->Arg(6);

static void BM_StaticOptimal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<Key> q = generate_sequence(parse_generator("zipf(1.1)"), n, 8 * n, 3);
  const FrequencyTable f = FrequencyTable::from_queries(Tree::iota_keys(n), q);
  for (auto _ : state) benchmark::DoNotOptimize(static_optimal(f).root());
}
BENCHMARK(BM_StaticOptimal)->Arg(256)->Arg(2048);
BENCHMARK_MAIN();
