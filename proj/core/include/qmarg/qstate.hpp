#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qmarg/linalg.hpp"
#include "qmarg/random.hpp"

namespace qmarg {

/// Local Hilbert-space dimensions of a tensor-product space.
///
/// Index convention: global index i = Σ_k i_k · stride_k with subsystem 0
/// most significant (row-major), so stride_{n−1} = 1.
class SubsystemDims {
 public:
  SubsystemDims() = default;
  explicit SubsystemDims(std::vector<std::size_t> dims);
  SubsystemDims(std::initializer_list<std::size_t> dims) : SubsystemDims(std::vector<std::size_t>(dims)) {}

  std::size_t count() const noexcept { return dims_.size(); }
  std::size_t operator[](std::size_t k) const { return dims_[k]; }
  std::span<const std::size_t> values() const noexcept { return dims_; }
  std::size_t total() const noexcept { return total_; }
  std::size_t stride(std::size_t k) const;
  /// Product of the selected local dimensions.
  std::size_t product_of(std::span<const std::size_t> subsystems) const;

  bool operator==(const SubsystemDims& other) const { return dims_ == other.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Sorted, distinct subsystem indices to keep in a reduction.
class SubsetSpec {
 public:
  SubsetSpec(std::vector<std::size_t> keep, const SubsystemDims& dims);
  SubsetSpec(std::initializer_list<std::size_t> keep, const SubsystemDims& dims)
      : SubsetSpec(std::vector<std::size_t>(keep), dims) {}

  std::span<const std::size_t> keep() const noexcept { return keep_; }

 private:
  std::vector<std::size_t> keep_;
};

struct StateTolerances {
  double trace = 1e-10;
  /// Smallest eigenvalue allowed before the matrix counts as non-PSD.
  double psd = 1e-10;
};

/// Hermitian, PSD, unit-trace matrix on a tensor-product space.
class DensityMatrix {
 public:
  /// Validates trace and positivity (one eigendecomposition).
  DensityMatrix(SubsystemDims dims, HermitianMatrix mat, const StateTolerances& tol = {});

  /// Skips the eigenvalue check; for states produced by trusted constructions.
  static DensityMatrix trusted(SubsystemDims dims, HermitianMatrix mat);

  const SubsystemDims& dims() const noexcept { return dims_; }
  const HermitianMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }

  /// Increasing eigenvalues, clamped into a probability Spectrum.
  Spectrum spectrum() const;

 private:
  DensityMatrix(SubsystemDims dims, HermitianMatrix mat, bool /*unchecked*/);

  SubsystemDims dims_;
  HermitianMatrix mat_;
};

/// Reduction onto the kept subsystems.
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsetSpec& spec);

/// Kronecker product with dims concatenated.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// U diag(λ) U† with U Haar-random.
DensityMatrix random_fixed_spectrum_state(const SubsystemDims& dims, const Spectrum& spectrum, Rng& rng);

/// Normalized complex Gaussian vector (uniform on the unit sphere).
std::vector<Complex> random_pure_vector(std::size_t dim, Rng& rng);

/// |ψ⟩⟨ψ| for a Haar-random |ψ⟩.
DensityMatrix random_pure_state(const SubsystemDims& dims, Rng& rng);

/// |ψ⟩⟨ψ| for a given (not necessarily normalized) vector.
DensityMatrix pure_state(const SubsystemDims& dims, std::span<const Complex> psi);

/// Flat Dirichlet draw on the probability simplex.
std::vector<double> random_simplex_point(std::size_t n, Rng& rng);

/// Count of eigenvalues above rel_tol · λ_max.
std::size_t numerical_rank(std::span<const double> eigenvalues, double rel_tol = 1e-9);
std::size_t numerical_rank(const DensityMatrix& rho, double rel_tol = 1e-9);

struct TripartiteRanks {
  std::size_t abc = 0;
  std::size_t ab = 0;
  std::size_t bc = 0;
  std::size_t b = 0;

  bool operator==(const TripartiteRanks&) const = default;
};

/// Numerical ranks of ρ_ABC, ρ_AB, ρ_BC and ρ_B.
TripartiteRanks measure_ranks(const DensityMatrix& rho_abc, double rel_tol = 1e-9);

struct EngineeredState {
  DensityMatrix state;
  /// Re-measured; may differ from the request.
  TripartiteRanks achieved;
  /// Dimension of ρ_B's planted kernel.
  std::size_t planted_b_kernel = 0;
  /// Kernel dimensions actually planted in ρ_AB and ρ_BC (at most the request).
  std::size_t planted_ab = 0;
  std::size_t planted_bc = 0;
};

/// Tripartite state (L, M, N) whose ρ_AB and ρ_BC are engineered to have
/// `ab_deficiency` and `bc_deficiency` zero eigenvalues.
///
/// Kernels are planted as subspaces: a random t-dimensional kernel of ρ_B
/// lifts to C^L⊗K_B in ρ_AB and K_B⊗C^N in ρ_BC, extra random kernel vectors
/// fill the remaining deficiencies, and the state is a random mixture of pure
/// states on the orthogonal complement of the induced ABC kernel. Achieved
/// ranks are re-measured; callers must rely on those, not the request.
///
/// Requires ab_deficiency < LM, bc_deficiency < MN, N·ab_deficiency ≤ L·bc_deficiency.
EngineeredState engineered_support_state(const SubsystemDims& dims, std::size_t ab_deficiency,
                                         std::size_t bc_deficiency, Rng& rng, double rank_tol = 1e-9);

}  // namespace qmarg
