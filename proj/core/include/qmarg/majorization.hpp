#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmarg/linalg.hpp"

namespace qmarg {

/// Sums of consecutive blocks of an increasing-ordered spectrum.
struct BlockSumVector {
  std::vector<double> values;
};

/// values[i] = Σ spectrum[i·block, (i+1)·block). Throws ArgumentError unless
/// block divides the spectrum length.
BlockSumVector block_sums(std::span<const double> increasing, std::size_t block);
inline BlockSumVector block_sums(const Spectrum& s, std::size_t block) { return block_sums(s.values(), block); }

inline double prefix_sum(const Spectrum& s, std::size_t k) { return prefix_sum(s.values(), k); }

enum class MajorizationOutcome { kHolds, kFailsAtK, kSumMismatch };

struct MajorizationResult {
  MajorizationOutcome outcome = MajorizationOutcome::kHolds;
  /// First violated prefix length (1-based) when outcome is kFailsAtK.
  std::size_t failed_k = 0;
  /// min over k < n of (Σ_k x↑ − Σ_k y↑).
  double min_prefix_slack = 0.0;
  /// Σx − Σy.
  double total_difference = 0.0;

  bool holds() const noexcept { return outcome == MajorizationOutcome::kHolds; }
};

/// y ≻ x in the increasing-order convention: for every k the sum of the k
/// smallest entries of x is at least that of y (within tol), and the totals
/// agree within tol. Both inputs are re-sorted; prefix failures take
/// precedence over a total mismatch.
MajorizationResult majorizes(std::span<const double> y, std::span<const double> x, double tol = 1e-8);

}  // namespace qmarg
