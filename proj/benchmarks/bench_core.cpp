#include <benchmark/benchmark.h>

#include "opcalc/bounds.hpp"
#include "opcalc/doi.hpp"
#include "opcalc/generators.hpp"
#include "opcalc/zoo.hpp"

using namespace opcalc;

static void BM_SchattenNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  const CMat m = gaussian_matrix(rng, n, n);
  const SchattenOrder p(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(schatten_norm(m, p));
}
BENCHMARK(BM_SchattenNorm)->Arg(8)->Arg(32)->Arg(64);

static void BM_UnitaryEig(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMat u = gen_unitary(3, n);
  for (auto _ : state) benchmark::DoNotOptimize(unitary_eig(u));
}
BENCHMARK(BM_UnitaryEig)->Arg(8)->Arg(32)->Arg(64);

static void BM_FiniteDilation(benchmark::State& state) {
  const Contraction t = gen_contraction(5, static_cast<int>(state.range(0)), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(finite_dilation(t, 8));
}
BENCHMARK(BM_FiniteDilation)->Arg(4)->Arg(8)->Arg(16);

static void BM_BirmanSolomyak(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMat u = gen_unitary(11, n);
  const CMat v = gen_unitary(12, n);
  const CircleFunction f = zoo::by_id("rand-1-d6");
  for (auto _ : state) benchmark::DoNotOptimize(birman_solomyak_delta(f, u, v));
}
BENCHMARK(BM_BirmanSolomyak)->Arg(4)->Arg(8)->Arg(16);

static void BM_ExpIntegralDiff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PsdPair pp = gen_psd_pair(21, n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(exp_integral_diff(pp.a, pp.b, 0.3));
}
BENCHMARK(BM_ExpIntegralDiff)->Arg(4)->Arg(8);

static void BM_LipChordal(benchmark::State& state) {
  const CircleFunction f = zoo::abs_im_truncated(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lip_chordal(f));
}
BENCHMARK(BM_LipChordal)->Arg(8)->Arg(16)->Arg(24);

BENCHMARK_MAIN();
