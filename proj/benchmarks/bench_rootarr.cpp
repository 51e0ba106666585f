#include <benchmark/benchmark.h>

#include "rootarr/admissibility.hpp"
#include "rootarr/realizer.hpp"
#include "rootarr/roots.hpp"

namespace rootarr {
namespace {

void BM_IsolateExact(benchmark::State& state) {
  const ExactPolynomial p = parse_polynomial("(x-1)^3*(x+2)^2*(x^2+1)*(x-1/3)");
  for (auto _ : state) benchmark::DoNotOptimize(isolate_roots(p));
}
BENCHMARK(BM_IsolateExact);

void BM_IsolateFloat(benchmark::State& state) {
  const FloatPolynomial p = parse_polynomial("(x-1)*(x+2)*(x^2+1)*(x-1/3)*(x-5)").cast<double>();
  for (auto _ : state) benchmark::DoNotOptimize(isolate_roots(p));
}
BENCHMARK(BM_IsolateFloat);

void BM_ExtractSextic(benchmark::State& state) {
  const ExactPolynomial p = parse_polynomial("x^6 - x^2");
  const int s = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract(p, s));
}
BENCHMARK(BM_ExtractSextic)->DenseRange(1, 5);

void BM_IsAdmissible(benchmark::State& state) {
  const Arrangement a = parse_arrangement("P < Q < P^2Q < Q < P", {.n = 6, .s = 1, .m = 1, .m_prime = 1});
  for (auto _ : state) benchmark::DoNotOptimize(is_admissible(a));
}
BENCHMARK(BM_IsAdmissible);

void BM_Enumerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_admissible(n, 1, 0));
}
BENCHMARK(BM_Enumerate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_TauMap(benchmark::State& state) {
  const Arrangement a = parse_arrangement("P < Q < P^2Q < Q < P", {.n = 6, .s = 1, .m = 1});
  const TargetModel md = build_target_model(a, *is_admissible(a).rolle_witness);
  SearchDomain dom;
  dom.N = 2;
  dom.mult = md.w_mult;
  for (int j = 0; j < md.q; ++j) dom.w.push_back((j + 1.0) / (md.q + 1));
  for (int j = 0; j < md.M; ++j) {
    dom.g.push_back(0.5);
    dom.t.push_back(0.3);
  }
  for (auto _ : state) benchmark::DoNotOptimize(tau_map(dom, md, 0.0));
}
BENCHMARK(BM_TauMap);

void BM_RealizeQuadratic(benchmark::State& state) {
  const Arrangement a = parse_arrangement("P < Q < P", {.n = 2, .s = 1});
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(try_realize(a, cfg));
}
BENCHMARK(BM_RealizeQuadratic)->Unit(benchmark::kMillisecond);

void BM_RealizeSextic(benchmark::State& state) {
  const Arrangement a = parse_arrangement("P < Q < P^2Q < Q < P", {.n = 6, .s = 1, .m = 1, .m_prime = 1});
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(try_realize(a, cfg));
}
BENCHMARK(BM_RealizeSextic)->Unit(benchmark::kMillisecond);

void BM_SoundnessSweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(soundness_sweep(5, 2, 200, 1));
}
BENCHMARK(BM_SoundnessSweep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rootarr

BENCHMARK_MAIN();
