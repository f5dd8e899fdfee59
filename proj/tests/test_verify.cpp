#include <gtest/gtest.h>

#include <cmath>

#include "qmarg/errors.hpp"
#include "qmarg/verify.hpp"

namespace qmarg {
namespace {

CampaignConfig config(SubsystemDims dims, SpectrumMode mode, std::size_t samples, std::uint64_t seed) {
  CampaignConfig cfg;
  cfg.dims = std::move(dims);
  cfg.mode = mode;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

void expect_same(const CampaignResult& a, const CampaignResult& b) {
  EXPECT_EQ(a.total_samples, b.total_samples);
  EXPECT_EQ(a.total_violations, b.total_violations);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (const auto& [name, x] : a.records) {
    const auto& y = b.records.at(name);
    EXPECT_EQ(x.min_slack, y.min_slack) << name;
    EXPECT_EQ(x.max_slack, y.max_slack) << name;
    EXPECT_EQ(x.argmin_sample, y.argmin_sample) << name;
    EXPECT_EQ(x.argmin_seed, y.argmin_seed) << name;
    EXPECT_EQ(x.equality_count, y.equality_count) << name;
  }
  EXPECT_EQ(a.rank_theorem.applicable, b.rank_theorem.applicable);
  EXPECT_EQ(a.max_marginal_gap, b.max_marginal_gap);
}

TEST(CampaignConfig, Validation) {
  auto cfg = config({2, 2}, SpectrumMode::kFixed, 10, 0);
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg.fixed_spectrum = {0.5, 0.5};
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg.fixed_spectrum = {0.25, 0.25, 0.25, 0.25};
  EXPECT_NO_THROW(cfg.validate());
  cfg.samples = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  EXPECT_THROW(run_bipartite_campaign(config({2, 2, 2}, SpectrumMode::kDirichlet, 1, 0)), ArgumentError);
  EXPECT_THROW(run_pure_multipartite_campaign(config({2, 3}, SpectrumMode::kHaarPure, 1, 0)), ArgumentError);
}

TEST(SampleSeed, DistinctAcrossIndices) {
  EXPECT_NE(sample_seed(1, 0), sample_seed(1, 1));
  EXPECT_NE(sample_seed(1, 0), sample_seed(2, 0));
  EXPECT_EQ(sample_seed(5, 9), sample_seed(5, 9));
}

TEST(BipartiteCampaign, PureTwoQubitsHitBlockEquality) {
  const auto r = run_bipartite_campaign(config({2, 2}, SpectrumMode::kHaarPure, 1000, 1));
  EXPECT_TRUE(r.clean());
  EXPECT_EQ(r.total_samples, 1000u);
  EXPECT_EQ(r.records.at("bipartite.blocks_A[total]").equality_count, 1000u);
  EXPECT_EQ(r.records.at("bipartite.blocks_B[total]").equality_count, 1000u);
  EXPECT_TRUE(r.records.count("two_qubit.smallest_A"));
  EXPECT_LT(r.max_marginal_gap, 1e-9);
}

TEST(BipartiteCampaign, MaximallyMixedGivesConstantSlacks) {
  auto cfg = config({2, 2}, SpectrumMode::kFixed, 200, 2);
  cfg.fixed_spectrum = {0.25, 0.25, 0.25, 0.25};
  const auto r = run_bipartite_campaign(cfg);
  EXPECT_TRUE(r.clean());
  for (const auto& [name, agg] : r.records) EXPECT_LT(agg.max_slack - agg.min_slack, 1e-12) << name;
}

TEST(BipartiteCampaign, DirichletThreeByFour) {
  const auto r = run_bipartite_campaign(config({3, 4}, SpectrumMode::kDirichlet, 2000, 3));
  EXPECT_TRUE(r.clean());
  for (const auto& [name, agg] : r.records) {
    EXPECT_GE(agg.min_slack, -1e-8) << name;
    EXPECT_EQ(agg.evaluations, 2000u);
  }
  EXPECT_EQ(r.max_marginal_gap, -1.0);
}

TEST(Campaign, WorkerCountDoesNotChangeResults) {
  auto cfg = config({2, 3}, SpectrumMode::kDirichlet, 300, 4);
  const auto one = run_bipartite_campaign(cfg);
  cfg.workers = 4;
  const auto four = run_bipartite_campaign(cfg);
  expect_same(one, four);

  auto tri = config({2, 2, 2}, SpectrumMode::kEngineered, 60, 5);
  const auto t1 = run_tripartite_campaign(tri);
  tri.workers = 3;
  expect_same(t1, run_tripartite_campaign(tri));
}

TEST(Campaign, ArgminSeedReproducesTheSample) {
  const auto cfg = config({2, 2}, SpectrumMode::kDirichlet, 50, 6);
  const auto r = run_bipartite_campaign(cfg);
  for (const auto& [name, agg] : r.records) EXPECT_EQ(agg.argmin_seed, sample_seed(cfg.seed, agg.argmin_sample));
}

TEST(TripartiteCampaign, PureStates) {
  const auto r = run_tripartite_campaign(config({2, 2, 2}, SpectrumMode::kHaarPure, 1000, 7));
  EXPECT_TRUE(r.clean());
  EXPECT_EQ(r.rank_theorem.violated, 0u);
}

TEST(TripartiteCampaign, MaximallyMixedMajorizationsAreTight) {
  auto cfg = config({2, 2, 2}, SpectrumMode::kFixed, 50, 8);
  cfg.fixed_spectrum.assign(8, 0.125);
  const auto r = run_tripartite_campaign(cfg);
  for (const auto& [name, agg] : r.records) {
    if (name.find("blocks") == std::string::npos) continue;
    EXPECT_EQ(agg.equality_count, agg.evaluations) << name;
  }
}

TEST(TripartiteCampaign, EngineeredSweepHasApplicableSamples) {
  const auto r = run_tripartite_campaign(config({2, 2, 3}, SpectrumMode::kEngineered, 300, 9));
  EXPECT_TRUE(r.clean());
  EXPECT_GE(r.rank_theorem.applicable, 50u);
  EXPECT_EQ(r.rank_theorem.violated, 0u);
}

TEST(PureMultiCampaign, TwoPartiesHaveEqualSpectra) {
  const auto r = run_pure_multipartite_campaign(config({3, 3}, SpectrumMode::kHaarPure, 500, 10));
  EXPECT_TRUE(r.clean());
  EXPECT_LT(r.max_marginal_gap, 1e-9);
  for (const auto& [name, agg] : r.records) EXPECT_EQ(agg.equality_count, agg.evaluations) << name;
}

TEST(PureMultiCampaign, ThreeQubits) {
  const auto r = run_pure_multipartite_campaign(config({2, 2, 2}, SpectrumMode::kHaarPure, 2000, 11));
  EXPECT_TRUE(r.clean());
  EXPECT_EQ(r.records.size(), 6u);
}

TEST(PureMultiCampaign, ThreeQutritsRunPolytope) {
  const auto r = run_pure_multipartite_campaign(config({3, 3, 3}, SpectrumMode::kHaarPure, 1000, 12));
  EXPECT_TRUE(r.clean());
  EXPECT_TRUE(r.records.count("qutrit.ineq7[ABC]"));
  EXPECT_EQ(r.polytope_chain_inconsistencies, 0u);
}

TEST(Witness, MaximallyMixedIsIsotropic) {
  Rng rng(13);
  const SubsystemDims dims{2, 3};
  const auto rho = DensityMatrix(dims, HermitianMatrix::diagonal(std::vector<double>(6, 1.0 / 6)));
  const auto w = lemma_bound_witness(rho, 1, 2, 50, rng);
  // Each trial compresses onto kN + lL orthonormal-ish columns of I/6.
  EXPECT_NEAR(w.min_trial_trace, (1.0 * 3 + 2.0 * 2) / 6, 1e-12);
  EXPECT_EQ(w.violations, 0u);
  EXPECT_GE(w.min_trial_trace, w.lower_bound - 1e-12);
}

TEST(Witness, EigenvectorBlocksAttainMarginalSum) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const SubsystemDims dims{3, 3};
    const auto rho = random_fixed_spectrum_state(dims, Spectrum(random_simplex_point(9, rng)), rng);
    const auto w = lemma_bound_witness(rho, 2, 1, 10, rng);
    EXPECT_NEAR(w.eigenvector_trace, w.marginal_sum, 1e-9);
    EXPECT_GE(w.min_trial_trace, w.eigenvector_trace - 1e-9);
  }
}

TEST(Witness, RandomTrialsStayAboveBound) {
  Rng rng(15);
  const auto rho = random_fixed_spectrum_state({2, 3}, Spectrum(random_simplex_point(6, rng)), rng);
  for (std::size_t l = 1; l <= 2; ++l) {
    const auto w = lemma_bound_witness(rho, 1, l, 1000, rng);
    EXPECT_EQ(w.violations, 0u);
    EXPECT_GE(w.min_trial_trace, w.lower_bound - 1e-8);
    EXPECT_LT(w.max_overlap_defect, 1e-10);
  }
}

TEST(Witness, RejectsBadIndices) {
  Rng rng(16);
  const auto rho = random_pure_state({2, 3}, rng);
  EXPECT_THROW(lemma_bound_witness(rho, 0, 1, 1, rng), ArgumentError);
  EXPECT_THROW(lemma_bound_witness(rho, 2, 1, 1, rng), ArgumentError);
  EXPECT_THROW(lemma_bound_witness(rho, 1, 3, 1, rng), ArgumentError);
}

TEST(Compositions, Enumeration) {
  using C = std::vector<std::vector<std::size_t>>;
  EXPECT_EQ(sorted_compositions(2, 2), (C{{0, 2}, {1, 1}}));
  EXPECT_EQ(sorted_compositions(3, 3), (C{{0, 0, 3}, {0, 1, 2}, {1, 1, 1}}));
  EXPECT_EQ(sorted_compositions(6, 3).size(), 7u);
  EXPECT_TRUE(sorted_compositions(1, 0).empty());
}

TEST(Scan, ThreeQubitResolutionTwo) {
  ScanConfig cfg;
  cfg.checker = ScanChecker::kPureMultipartite;
  cfg.parties = 3;
  cfg.local_dim = 2;
  cfg.resolution = 2;
  const auto r = scan_polytope(cfg);
  ASSERT_EQ(r.rows.size(), 8u);
  EXPECT_EQ(r.coordinate_names.front(), "p0_l1");
  // All pure: satisfied.
  EXPECT_EQ(r.rows[0].verdict, Overall::kCompatibleNecessary);
  // Two pure parties and one mixed: violated at p = 1.
  EXPECT_EQ(r.rows[1].verdict, Overall::kIncompatible);
  EXPECT_NEAR(r.rows[1].min_slack, -0.5, 1e-15);
  EXPECT_EQ(r.rows[7].verdict, Overall::kCompatibleNecessary);
}

TEST(Scan, SampledBinsLieInSatisfiedCells) {
  ScanConfig cfg;
  cfg.resolution = 6;
  cfg.achievable_samples = 3000;
  cfg.seed = 17;
  const auto r = scan_polytope(cfg);
  EXPECT_EQ(r.containment_violations, 0u);
  std::size_t hit = 0;
  for (const auto& row : r.rows) hit += row.achievable_hits;
  EXPECT_EQ(hit, 3000u);
  EXPECT_EQ(r.lipschitz, 9.0);
}

TEST(Scan, RejectsBadConfig) {
  ScanConfig cfg;
  cfg.resolution = 1;
  EXPECT_THROW(scan_polytope(cfg), ArgumentError);
  cfg.resolution = 4;
  cfg.local_dim = 2;
  EXPECT_THROW(scan_polytope(cfg), ArgumentError);
}

}  // namespace
}  // namespace qmarg
