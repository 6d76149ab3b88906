// Serial reference paths against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "e8magic/certify.hpp"
#include "e8magic/e8.hpp"
#include "e8magic/modforms.hpp"
#include "e8magic/radial.hpp"

namespace {

void BM_Shells(benchmark::State& state) {
  const bool parallel = state.range(1) != 0;
  const int max_norm = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(e8magic::e8::enumerate_shells(max_norm, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Shells)->Args({32, 0})->Args({32, 1})->Args({40, 0})->Args({40, 1})->Unit(benchmark::kMillisecond);

void BM_Certify(benchmark::State& state) {
  const bool parallel = state.range(1) != 0;
  e8magic::certify::CertifyOptions o;
  o.parallel = parallel;
  o.t_star = o.u_star = static_cast<double>(state.range(0));
  auto target = e8magic::certify::Target::B;
  e8magic::modforms::catalog().get(e8magic::modforms::FormId::PHI_0);
  for (auto _ : state) benchmark::DoNotOptimize(e8magic::certify::certify_sign(target, o));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Certify)->Args({4, 0})->Args({4, 1})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

void BM_Tabulate(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  e8magic::radial::eval_g(1.0, e8magic::radial::Fn::g);
  for (auto _ : state)
    benchmark::DoNotOptimize(e8magic::radial::tabulate(e8magic::radial::Fn::g, 6.0, 1e-3, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Tabulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
