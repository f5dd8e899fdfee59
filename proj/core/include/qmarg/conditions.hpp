#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmarg/linalg.hpp"
#include "qmarg/qstate.hpp"

namespace qmarg {

enum class Verdict { kSatisfied, kEqualityWithinTol, kViolated };

/// Whether a record enters the necessity verdict, or only the sufficiency one.
enum class RecordRole { kNecessary, kSufficiencyOnly };

enum class Overall { kCompatibleNecessary, kIncompatible };

enum class SufficiencyClaim { kNecessaryOnly, kClaimedSufficient };

std::string_view to_string(Verdict v);
std::string_view to_string(RecordRole r);
std::string_view to_string(Overall o);
std::string_view to_string(SufficiencyClaim c);

/// One inequality instance in ≥ form: lhs ≥ rhs, slack = lhs − rhs.
/// Equality constraints are stored with slack = −|lhs − rhs|.
struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  Verdict verdict = Verdict::kSatisfied;
  RecordRole role = RecordRole::kNecessary;
};

struct CompatReport {
  std::vector<InequalityRecord> records;
  /// Incompatible iff some necessary record is violated.
  Overall overall = Overall::kCompatibleNecessary;
  /// Minimum slack over necessary records.
  double min_slack = 0.0;
  SufficiencyClaim sufficiency = SufficiencyClaim::kNecessaryOnly;
  /// Only meaningful with kClaimedSufficient: every record (both roles) holds.
  bool sufficient_conditions_hold = false;
  double tolerance = 1e-8;

  const InequalityRecord* find(std::string_view name) const;
  bool compatible() const noexcept { return overall == Overall::kCompatibleNecessary; }
};

struct CheckOptions {
  /// violated iff slack < −tol; equality iff |slack| ≤ tol.
  double tol = 1e-8;
};

Verdict classify(double slack, double tol);

/// Two qubits: the three smallest-eigenvalue inequalities plus the extra gap
/// condition |λ₁(A) − λ₁(B)| ≤ min{λ₃ − λ₁, λ₄ − λ₂}(AB) that completes the
/// characterization. The gap record only feeds the sufficiency verdict.
CompatReport check_two_qubit(const Spectrum& a, const Spectrum& b, const Spectrum& ab,
                             const CheckOptions& options = {});

/// L × N bipartite state: block-sum majorization of each marginal plus, for
/// 1 ≤ k < L and 1 ≤ l < N,
///   Σ_k λ↑(A) + Σ_l λ↑(B) ≥ Σ_{kN+lL−kl} λ↑(AB) + Σ_{kl} λ↑(AB).
CompatReport check_bipartite(const Spectrum& a, const Spectrum& b, const Spectrum& ab,
                             const CheckOptions& options = {});

/// L × M × N tripartite state: block-sum majorizations between ABC and its
/// two-party reductions and between those and ρ_B, plus for 0 ≤ μ < M,
/// 0 ≤ r < L, 0 ≤ s < N, (μ, r, s) ≠ 0:
///   Σ_{μL+r} λ↑(AB) + Σ_{μN+s} λ↑(BC) ≥ Σ_{μLN+Nr+Ls−rs} λ↑(ABC) + Σ_{μLN+rs} λ↑(ABC).
CompatReport check_tripartite(const Spectrum& ab, const Spectrum& bc, const Spectrum& b, const Spectrum& abc,
                              const SubsystemDims& dims, const CheckOptions& options = {});

/// The rank-deficiency theorem's integer part [x].
enum class BracketConvention {
  kStrictlyLess,  ///< greatest integer strictly smaller than x, so [2] = 1
  kFloor,
};

enum class RankStatus { kNotApplicable, kSatisfied, kViolated };
std::string_view to_string(RankStatus s);

struct RankOrientation {
  std::string name;  ///< "direct" or "exchanged" (A and C swapped)
  RankStatus status = RankStatus::kNotApplicable;
  /// Deficiencies in this orientation; r belongs to the pair containing the
  /// first party, s to the pair containing the last.
  long long r = 0, s = 0, t = 0;
  long long bound = 0;
  std::string reason;
};

struct RankTheoremReport {
  std::array<RankOrientation, 2> orientations;
  /// kViolated if any orientation is violated, else kSatisfied if any applies.
  RankStatus status = RankStatus::kNotApplicable;
};

/// Greatest integer below (or, with kFloor, not above) numerator/denominator.
long long rank_bracket(long long numerator, long long denominator, BracketConvention convention);

/// If rank(ρ_ABC) = LMN − Ls, rank(ρ_BC) = MN − s, rank(ρ_AB) = LM − r,
/// rank(ρ_B) = M − t and Nr ≤ Ls, then t ≤ [(r − 1)/L] + 1. Evaluated in both
/// the given and the A↔C exchanged orientation.
RankTheoremReport check_rank_theorem(const TripartiteRanks& ranks, const SubsystemDims& dims,
                                     BracketConvention convention = BracketConvention::kStrictlyLess);

/// N-partite pure state with M-dimensional parties: for k ≠ l and 1 ≤ p < M,
///   Σ_{j≠k,l} Σ_{i<M} λ↑_i(j) + Σ_{i≤p} λ↑_i(k) ≥ Σ_{i≤p} λ↑_i(l).
CompatReport check_pure_multipartite(std::span<const Spectrum> spectra, const CheckOptions& options = {});

/// The seven three-qutrit pure-state inequalities and every A/B/C relabeling,
/// deduplicated by coefficient vector. Claimed to characterize the polytope.
CompatReport check_three_qutrit_polytope(const Spectrum& a, const Spectrum& b, const Spectrum& c,
                                         const CheckOptions& options = {});

/// Sum of |coefficients| of the widest three-qutrit inequality; a Lipschitz
/// bound of every slack in the sup-norm of the sorted spectra.
double three_qutrit_lipschitz();

}  // namespace qmarg
