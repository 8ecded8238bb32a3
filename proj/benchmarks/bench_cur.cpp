#include <benchmark/benchmark.h>

#include "cur/approx_svd.hpp"
#include "cur/cur.hpp"
#include "cur/generate.hpp"
#include "cur/linalg.hpp"
#include "cur/sketch.hpp"
#include "cur/subset_select.hpp"

namespace {

using namespace cur;

void BM_SseSparse(benchmark::State& st) {
  const Index n = st.range(0);
  Rng rng(1);
  const SparseMatrix a = random_sparse(n, n, 0.01, rng);
  const auto w = make_sse(n, 400, rng);
  for (auto _ : st) benchmark::DoNotOptimize(apply_sse_compact(w, a));
  st.counters["nnz"] = static_cast<double>(a.nonZeros());
  st.SetItemsProcessed(st.iterations() * a.nonZeros());
}
BENCHMARK(BM_SseSparse)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Bss(benchmark::State& st) {
  const Index n = st.range(0), k = st.range(1);
  Rng rng(2);
  const DenseMatrix v = orthonormal_range(gaussian(n, k, rng));
  const DenseMatrix a = gaussian(n, 20, rng);
  for (auto _ : st) benchmark::DoNotOptimize(bss_sampling(v, a, 4 * k));
}
BENCHMARK(BM_Bss)->Args({200, 4})->Args({1000, 8})->Unit(benchmark::kMillisecond);

void BM_RandomizedSvd(benchmark::State& st) {
  const Index n = st.range(0);
  Rng rng(3);
  const DenseMatrix a = low_rank_plus_noise(n, n, 10, 0.1, rng);
  for (auto _ : st) benchmark::DoNotOptimize(randomized_svd(a, 5, 0.5, rng));
}
BENCHMARK(BM_RandomizedSvd)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SparseSvd(benchmark::State& st) {
  const Index n = st.range(0);
  Rng rng(4);
  const SparseMatrix a = sparse_low_rank_plus_noise(n, n, 5, 0.005, 0.05, rng);
  for (auto _ : st) benchmark::DoNotOptimize(sparse_svd(a, 5, 1.0, rng));
}
BENCHMARK(BM_SparseSvd)->Arg(2000)->Unit(benchmark::kMillisecond);

CurConfig config(Variant v, Fidelity f, Index k, double eps) {
  CurConfig c;
  c.variant = v;
  c.fidelity = f;
  c.k = k;
  c.eps = eps;
  return c;
}

void BM_CurLinear(benchmark::State& st) {
  const Index n = st.range(0);
  Rng rng(5);
  const DenseMatrix a = low_rank_plus_noise(n, n, 10, 0.1, rng);
  auto cfg = config(Variant::linear, Fidelity::heuristic, 5, 0.5);
  for (auto _ : st) {
    benchmark::DoNotOptimize(decompose(a, cfg));
    ++cfg.seed;
  }
}
BENCHMARK(BM_CurLinear)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_CurSparse(benchmark::State& st) {
  const Index n = st.range(0);
  Rng rng(6);
  const SparseMatrix a = sparse_low_rank_plus_noise(n, n, 5, 0.0025, 0.05, rng);
  auto cfg = config(Variant::sparse, Fidelity::heuristic, 5, 0.5);
  for (auto _ : st) {
    benchmark::DoNotOptimize(decompose(a, cfg));
    ++cfg.seed;
  }
  st.counters["nnz"] = static_cast<double>(a.nonZeros());
}
BENCHMARK(BM_CurSparse)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_CurDeterministic(benchmark::State& st) {
  const Index n = st.range(0);
  Rng rng(7);
  const DenseMatrix a = low_rank_plus_noise(n, n, 5, 0.1, rng);
  const auto cfg = config(Variant::deterministic, Fidelity::paper, 2, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(decompose(a, cfg));
}
BENCHMARK(BM_CurDeterministic)->Arg(40)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
