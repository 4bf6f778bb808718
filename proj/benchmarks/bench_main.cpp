#include <benchmark/benchmark.h>

#include "qlsplab/analysis.hpp"
#include "qlsplab/encoding.hpp"
#include "qlsplab/solver.hpp"

using namespace qlsplab;

namespace {

// Arguments are (N, q); the matrix side is 6qN.

void BM_Materialize(benchmark::State& st) {
  const auto chain = random_chain(st.range(0), st.range(1), 1);
  const SparseOracleView view(chain);
  for (auto _ : st) benchmark::DoNotOptimize(materialize_dense(view));
}

void BM_AssembleViaOracles(benchmark::State& st) {
  const auto chain = random_chain(st.range(0), st.range(1), 1);
  const SparseOracleView view(chain);
  for (auto _ : st) {
    QueryLedger ledger;
    benchmark::DoNotOptimize(assemble_via_oracles(view, ledger));
  }
}

void BM_Spectral(benchmark::State& st) {
  const auto chain = random_chain(st.range(0), st.range(1), 1);
  const Eigen::MatrixXd a = materialize_dense(SparseOracleView(chain));
  for (auto _ : st) benchmark::DoNotOptimize(spectral_check(a, st.range(1)));
}

void BM_SolveDirect(benchmark::State& st) {
  const auto chain = random_chain(st.range(0), st.range(1), 1);
  const SparseOracleView view(chain);
  const Eigen::MatrixXd a = materialize_dense(view);
  for (auto _ : st) benchmark::DoNotOptimize(solve_direct(a, view.space()));
}

void BM_SolveNeumann(benchmark::State& st) {
  const auto chain = random_chain(st.range(0), st.range(1), 1);
  for (auto _ : st) {
    QueryLedger ledger;
    benchmark::DoNotOptimize(solve_neumann(chain, ledger, 1e-6));
  }
}

void BM_Sampling(benchmark::State& st) {
  const auto state = exact_solution_state(random_chain(st.range(0), st.range(1), 1)).state;
  for (auto _ : st) benchmark::DoNotOptimize(sample_outcomes(state, 10000, 7));
  st.SetItemsProcessed(st.iterations() * 10000);
}

}  // namespace

BENCHMARK(BM_Materialize)->Args({16, 4})->Args({64, 8});
BENCHMARK(BM_AssembleViaOracles)->Args({16, 4})->Args({64, 8});
BENCHMARK(BM_Spectral)->Args({4, 4})->Args({16, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveDirect)->Args({4, 4})->Args({16, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveNeumann)->Args({16, 4})->Args({64, 8});
BENCHMARK(BM_Sampling)->Args({16, 4});
BENCHMARK_MAIN();
