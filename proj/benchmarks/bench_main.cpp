#include <benchmark/benchmark.h>

#include "qmarg/conditions.hpp"
#include "qmarg/linalg.hpp"
#include "qmarg/qstate.hpp"
#include "qmarg/verify.hpp"

namespace {

using namespace qmarg;

HermitianMatrix random_hermitian(std::size_t n, Rng& rng) {
  const auto g = ginibre(n, n, rng);
  return HermitianMatrix(g + g.adjoint());
}

void BM_Eigh(benchmark::State& state) {
  Rng rng(1);
  const auto a = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(a));
}
BENCHMARK(BM_Eigh)->Arg(4)->Arg(8)->Arg(16)->Arg(27);

void BM_PartialTrace(benchmark::State& state) {
  Rng rng(2);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const SubsystemDims dims{d, d, d};
  const auto rho = random_pure_state(dims, rng);
  const SubsetSpec keep({0, 2}, dims);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, keep));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(3)->Arg(4);

void BM_CheckBipartite(benchmark::State& state) {
  Rng rng(3);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const Spectrum a(random_simplex_point(d, rng)), b(random_simplex_point(d, rng)),
      ab(random_simplex_point(d * d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(check_bipartite(a, b, ab));
}
BENCHMARK(BM_CheckBipartite)->Arg(2)->Arg(4)->Arg(8);

void BM_CheckTripartite(benchmark::State& state) {
  Rng rng(4);
  const SubsystemDims dims{2, 3, 2};
  const Spectrum ab(random_simplex_point(6, rng)), bc(random_simplex_point(6, rng)), b(random_simplex_point(3, rng)),
      abc(random_simplex_point(12, rng));
  for (auto _ : state) benchmark::DoNotOptimize(check_tripartite(ab, bc, b, abc, dims));
}
BENCHMARK(BM_CheckTripartite);

void BM_ThreeQutritPolytope(benchmark::State& state) {
  Rng rng(5);
  const Spectrum a(random_simplex_point(3, rng)), b(random_simplex_point(3, rng)), c(random_simplex_point(3, rng));
  for (auto _ : state) benchmark::DoNotOptimize(check_three_qutrit_polytope(a, b, c));
}
BENCHMARK(BM_ThreeQutritPolytope);

void BM_TripartiteCampaign(benchmark::State& state) {
  CampaignConfig cfg;
  cfg.dims = SubsystemDims{2, 2, 2};
  cfg.mode = SpectrumMode::kDirichlet;
  cfg.samples = 1000;
  cfg.seed = 6;
  for (auto _ : state) benchmark::DoNotOptimize(run_tripartite_campaign(cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.samples));
}
BENCHMARK(BM_TripartiteCampaign)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
