#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmarg/conditions.hpp"
#include "qmarg/qstate.hpp"
#include "qmarg/random.hpp"

namespace qmarg {

enum class SpectrumMode {
  kHaarPure,    ///< Haar-random pure states
  kFixed,       ///< U diag(λ) U† for a caller-supplied λ
  kDirichlet,   ///< U diag(λ) U† with λ flat-Dirichlet per sample
  kEngineered,  ///< tripartite only: planted rank deficiencies
};

std::string_view to_string(SpectrumMode mode);

struct CampaignConfig {
  SubsystemDims dims;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  SpectrumMode mode = SpectrumMode::kDirichlet;
  /// Used with kFixed; length must equal dims.total().
  std::vector<double> fixed_spectrum;
  double slack_tol = 1e-8;
  double rank_tol = 1e-9;
  BracketConvention bracket = BracketConvention::kStrictlyLess;
  /// Results do not depend on this.
  std::size_t workers = 1;

  /// Throws ArgumentError on inconsistent settings.
  void validate() const;
};

struct RecordAggregate {
  RecordRole role = RecordRole::kNecessary;
  std::size_t evaluations = 0;
  std::size_t violation_count = 0;
  std::size_t equality_count = 0;
  double min_slack = 0.0;
  double max_slack = 0.0;
  /// Sample index and per-sample seed of the (first) minimizing sample.
  std::size_t argmin_sample = 0;
  std::uint64_t argmin_seed = 0;
};

struct RankAggregate {
  std::size_t applicable = 0;
  std::size_t not_applicable = 0;
  std::size_t violated = 0;
};

struct CampaignResult {
  std::string kind;
  /// Keyed by record name; ordered for stable output.
  std::map<std::string, RecordAggregate> records;
  std::size_t total_samples = 0;
  std::size_t total_violations = 0;
  /// Tripartite campaigns only.
  RankAggregate rank_theorem;
  /// Pure two-party samples: max elementwise gap between the two marginal
  /// spectra (zero-padded); negative when not measured.
  double max_marginal_gap = -1.0;
  /// Three-qutrit pure campaigns: samples inside the qutrit polytope whose
  /// pure-state chain inequalities fail (must stay zero).
  std::size_t polytope_chain_inconsistencies = 0;
  /// Not part of the deterministic payload.
  double wall_clock_seconds = 0.0;

  bool clean() const noexcept {
    return total_violations == 0 && rank_theorem.violated == 0 && polytope_chain_inconsistencies == 0;
  }
};

/// Seed used for sample `index` of a campaign seeded with `seed`.
inline std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) { return mix_seed(seed, index); }

/// Two subsystems: bipartite inequalities (plus the two-qubit set at 2 × 2).
CampaignResult run_bipartite_campaign(const CampaignConfig& cfg);

/// Three subsystems: tripartite inequalities and the rank theorem on
/// numerically measured ranks.
CampaignResult run_tripartite_campaign(const CampaignConfig& cfg);

/// N equal-dimension parties, Haar pure states: chain inequalities and, at
/// three qutrits, the polytope inequalities.
CampaignResult run_pure_multipartite_campaign(const CampaignConfig& cfg);

struct WitnessReport {
  std::size_t k = 0, l = 0;
  /// Σ_k λ↑(A) + Σ_l λ↑(B).
  double marginal_sum = 0.0;
  /// Σ_{kN+lL−kl} λ↑(AB) + Σ_{kl} λ↑(AB).
  double lower_bound = 0.0;
  /// Smallest tr(U₁†ρU₁) + tr(U₂†ρU₂) over the random structured trials.
  double min_trial_trace = 0.0;
  /// Largest |Σ|⟨U₁ col|U₂ col⟩|² − kl| observed.
  double max_overlap_defect = 0.0;
  /// Same trace with the blocks built from marginal eigenvectors.
  double eigenvector_trace = 0.0;
  std::size_t trials = 0;
  /// Trials whose trace fell below lower_bound − tol.
  std::size_t violations = 0;
};

/// Evaluates random structured isometries U₁ = [u_i ⊗ I_N] (k blocks) and
/// U₂ = [I_L ⊗ v_j] (l blocks) against ρ_AB and checks the two-group trace
/// bound with overlap count kl.
WitnessReport lemma_bound_witness(const DensityMatrix& rho, std::size_t k, std::size_t l, std::size_t trials,
                                  Rng& rng, double tol = 1e-8);

enum class ScanChecker { kThreeQutrit, kPureMultipartite };

struct ScanConfig {
  ScanChecker checker = ScanChecker::kThreeQutrit;
  std::size_t parties = 3;
  std::size_t local_dim = 3;
  std::size_t resolution = 6;
  /// Real pure states binned onto the grid; 0 disables the estimate.
  std::size_t achievable_samples = 0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
};

struct ScanRow {
  /// Per party, the increasing spectrum on the grid.
  std::vector<double> coords;
  Overall verdict = Overall::kCompatibleNecessary;
  double min_slack = 0.0;
  std::size_t achievable_hits = 0;
  /// Largest sup-norm distance from a binned sample to this grid point.
  double max_rounding = 0.0;
};

struct ScanResult {
  std::vector<std::string> coordinate_names;
  std::vector<ScanRow> rows;
  /// Bound on |Δslack| per unit sup-norm change of the sorted spectra.
  double lipschitz = 0.0;
  /// Achievable rows whose grid slack is below −(lipschitz·rounding + tol).
  std::size_t containment_violations = 0;
};

/// Increasing integer compositions of `total` into `parts`, lexicographic.
std::vector<std::vector<std::size_t>> sorted_compositions(std::size_t total, std::size_t parts);

/// Evaluates the selected checker on every simplex-grid point (lexicographic
/// over parties, party 0 most significant) and, optionally, bins sampled
/// real-state spectra to test containment.
ScanResult scan_polytope(const ScanConfig& cfg);

}  // namespace qmarg
