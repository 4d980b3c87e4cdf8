#include <benchmark/benchmark.h>

#include <string>

#include "helmwave/harness.hpp"
#include "helmwave/rng.hpp"

using namespace helmwave;

namespace {

struct Instance {
  Hierarchy h;
  Problem p;
};

Instance make(const std::string& levels, int n) {
  const LevelSpec spec = LevelSpec::parse(levels);
  const RectMesh mesh(spec.total_mx() * n, spec.total_my() * n);
  const WavenumberField field = WavenumberField::constant(mesh.nx);
  return {build_hierarchy(mesh, field, spec), random_solution_problem(mesh, field, 1)};
}

MethodParams with_nc(int nc) {
  MethodParams mp;
  mp.n_c = {nc};
  return mp;
}

}  // namespace

static void BM_RasApply(benchmark::State& state) {
  const Instance inst = make("2x2", static_cast<int>(state.range(0)));
  const HierarchicalPreconditioner pre(inst.h, with_nc(0));
  const Vector r = GaussianStream(9, 0xB0).vector(pre.root_context().dim());
  for (auto _ : state) benchmark::DoNotOptimize(ras_apply(pre.root_context(), r));
}
BENCHMARK(BM_RasApply)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_PrecondApply(benchmark::State& state) {
  const Instance inst = make("2x2,2x2", static_cast<int>(state.range(0)));
  const HierarchicalPreconditioner pre(inst.h, MethodParams{{6, 3}, {1, 1}});
  const Vector r = GaussianStream(10, 0xB1).vector(pre.root_context().dim());
  for (auto _ : state) benchmark::DoNotOptimize(pre.apply(r));
}
BENCHMARK(BM_PrecondApply)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_CoarseSetup(benchmark::State& state) {
  const Instance inst = make("4x4", static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const HierarchicalPreconditioner pre(inst.h, with_nc(4));
    benchmark::DoNotOptimize(pre.coarse_dim_total());
  }
}
BENCHMARK(BM_CoarseSetup)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& state) {
  const Instance inst = make("4x4", static_cast<int>(state.range(0)));
  const MethodParams mp = with_nc(5);
  for (auto _ : state) {
    const SolveReport rep = solve(inst.p, inst.h, mp);
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(BM_Solve)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
