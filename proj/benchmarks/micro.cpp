#include <benchmark/benchmark.h>

#include "isynth/bench.hpp"
#include "isynth/dfa.hpp"
#include "isynth/engine.hpp"
#include "isynth/game.hpp"
#include "isynth/parser.hpp"

using namespace isynth;

namespace {

void BM_PlantsGoalToDfa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Context ctx;
    auto fam = bench::gen_plants(ctx, 1);
    auto atoms = fam.partition.vocabulary();
    auto d = automata::minimize(automata::from_formula(ctx, fam.goal(ctx, n), atoms));
    benchmark::DoNotOptimize(d.size());
  }
}
BENCHMARK(BM_PlantsGoalToDfa)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// One full incremental run over plants(1), goals 0..n, per engine.
void BM_PlantsIncremental(benchmark::State& state) {
  const auto mode = state.range(0) == 0 ? engine::Mode::DP : engine::Mode::FP;
  bench::BenchSpec spec;
  spec.family = {bench::FamilyKind::Plants, 1, 1};
  spec.n_max = static_cast<std::size_t>(state.range(1));
  spec.mode = mode;
  for (auto _ : state) {
    auto r = bench::run_instance(spec);
    benchmark::DoNotOptimize(r.rows.size());
  }
  state.SetLabel(engine::to_string(mode));
}
BENCHMARK(BM_PlantsIncremental)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMillisecond);

void BM_SolveCounterOrg(benchmark::State& state) {
  Context ctx;
  auto fam = bench::gen_counter(ctx, static_cast<std::size_t>(state.range(0)));
  auto atoms = fam.partition.vocabulary();
  game::DfaGame g{automata::minimize(automata::from_formula(ctx, fam.goal(ctx, 0), atoms)), fam.partition};
  for (auto _ : state) {
    auto sol = game::solve(g);
    benchmark::DoNotOptimize(sol.iterations);
  }
  state.counters["states"] = static_cast<double>(g.dfa.size());
}
BENCHMARK(BM_SolveCounterOrg)->DenseRange(1, 3);

void BM_BddRandomConjunction(benchmark::State& state) {
  for (auto _ : state) {
    bdd::Manager m;
    bdd::Ref f = m.one();
    for (bdd::Var v = 0; v + 1 < 16; ++v) f = m.and_(f, m.or_(m.var(v), m.nvar(v + 1)));
    benchmark::DoNotOptimize(m.dag_size(f));
  }
}
BENCHMARK(BM_BddRandomConjunction);

}  // namespace
BENCHMARK_MAIN();
