#include <benchmark/benchmark.h>

#include "tsylv/block_krylov.hpp"
#include "tsylv/global_krylov.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/rng.hpp"

namespace {

tsylv::DenseTensor3 random_tensor(tsylv::index_t n1, tsylv::index_t n2, tsylv::index_t n3,
                                  std::uint64_t seed) {
  tsylv::Xoshiro256ss rng(seed);
  tsylv::DenseTensor3 t(n1, n2, n3);
  for (tsylv::index_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform_sym();
  return t;
}

void BM_TProduct(benchmark::State& state) {
  const tsylv::index_t n = state.range(0);
  const auto a = random_tensor(n, n, 4, 1);
  const auto b = random_tensor(n, 8, 4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsylv::t_product(a, b));
  }
}
BENCHMARK(BM_TProduct)->Arg(64)->Arg(256)->Arg(1024);

void BM_TProductReference(benchmark::State& state) {
  const tsylv::index_t n = state.range(0);
  const auto a = random_tensor(n, n, 4, 1);
  const auto b = random_tensor(n, 8, 4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsylv::t_product_reference(a, b));
  }
}
BENCHMARK(BM_TProductReference)->Arg(64)->Arg(256);

void BM_SylvesterApply(benchmark::State& state) {
  const tsylv::index_t n = state.range(0);
  tsylv::ProblemConfig cfg;
  cfg.n = n;
  cfg.q = 3;
  cfg.n3 = 2;
  const auto p = tsylv::gen_convdiff(cfg);
  const auto op = tsylv::make_sylvester_operator(p.a, p.b, -1);
  const auto x = random_tensor(n, 3, 2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(x));
  }
}
BENCHMARK(BM_SylvesterApply)->Arg(500)->Arg(1000)->Arg(2000);

void BM_TbasCycle(benchmark::State& state) {
  const tsylv::index_t n = state.range(0);
  tsylv::ProblemConfig cfg;
  cfg.n = n;
  cfg.q = 3;
  cfg.n3 = 2;
  const auto p = tsylv::gen_convdiff(cfg);
  const auto ws = tsylv::make_tbas_workspace<double>(p.a, p.b, -1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsylv::detail::tbas_cycle_ws(ws, p.c, 10, 0.0));
  }
}
BENCHMARK(BM_TbasCycle)->Arg(500)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
