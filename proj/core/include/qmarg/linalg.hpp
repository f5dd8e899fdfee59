#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qmarg/random.hpp"

namespace qmarg {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  /// Columns [first, first + count).
  ComplexMatrix columns(std::size_t first, std::size_t count) const;

  Complex trace() const;
  double frobenius_norm() const;
  /// Largest |a_ij|.
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |(U†U − I)_ij|.
double orthonormality_defect(const ComplexMatrix& u);

/// Square complex matrix whose stored entries satisfy a_ij = conj(a_ji)
/// exactly. Construction symmetrizes (A + A†)/2 and rejects inputs whose
/// asymmetry exceeds `asymmetry_tol` (relative to max(1, max|a_ij|)).
class HermitianMatrix {
 public:
  static constexpr double kDefaultAsymmetryTol = 1e-10;

  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double asymmetry_tol = kDefaultAsymmetryTol);

  static HermitianMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

/// Matrix with orthonormal columns (n × r, r ≤ n).
class Isometry {
 public:
  static constexpr double kTolerance = 1e-10;

  Isometry() = default;
  /// Throws ArgumentError if the columns are not orthonormal within kTolerance.
  explicit Isometry(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  /// Increasing order.
  std::vector<double> values;
  /// Column i is the unit eigenvector for values[i].
  ComplexMatrix vectors;
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm ≤ rel_tol · ‖A‖_F.
  double rel_tol = 1e-12;
  int max_sweeps = 100;
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Throws ConvergenceError when the sweep cap is reached.
EigenDecomposition eigh(const HermitianMatrix& a, const JacobiOptions& options = {});

/// Eigenvalues only, increasing.
std::vector<double> eigvalsh(const HermitianMatrix& a, const JacobiOptions& options = {});

struct QrResult {
  ComplexMatrix q;  ///< m × n, orthonormal columns
  ComplexMatrix r;  ///< n × n, upper triangular
};

/// Thin Householder QR of an m × n matrix with m ≥ n.
QrResult qr(const ComplexMatrix& a);

/// m × n matrix of i.i.d. standard complex Gaussians (E|z|² = 1).
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed n × n unitary: QR of a Ginibre matrix with each column of
/// Q rotated by the phase of the matching diagonal entry of R.
ComplexMatrix qr_haar_unitary(std::size_t n, Rng& rng);

/// Haar-distributed n × r isometry (first r columns of a Haar unitary).
Isometry random_isometry(std::size_t n, std::size_t r, Rng& rng);

/// Real part of tr(V† A V).
double compressed_trace(const HermitianMatrix& a, const ComplexMatrix& v);

struct TraceMinimum {
  double value;
  Isometry achiever;
};

/// min over n × r isometries U of tr(U† A U): the sum of the r smallest
/// eigenvalues, attained by the matching eigenvectors.
TraceMinimum min_trace_isometry(const HermitianMatrix& a, std::size_t r);

/// Sum of the k smallest entries of an increasing-ordered list.
double prefix_sum(std::span<const double> increasing, std::size_t k);

/// Probability spectrum: increasing, nonnegative, summing to one.
///
/// Entries in (−zero_clamp, 0) are clamped to zero; anything more negative is
/// a PsdViolation. The total must equal one within sum_tol.
class Spectrum {
 public:
  static constexpr double kZeroClamp = 1e-10;
  static constexpr double kSumTol = 1e-10;

  Spectrum() = default;
  /// Sorts increasing, clamps, validates.
  explicit Spectrum(std::vector<double> values, double zero_clamp = kZeroClamp,
                    double sum_tol = kSumTol);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double max() const { return values_.back(); }
  /// Σ of the k smallest eigenvalues.
  double prefix(std::size_t k) const { return prefix_sum(values_, k); }

  bool operator==(const Spectrum&) const = default;

 private:
  std::vector<double> values_;
};

/// Lower bound on tr(U† A U) when the s normalized columns of U split into two
/// internally orthonormal groups with integer overlap count kappa:
/// Σ_{i≤kappa} λ_i + Σ_{i≤s−kappa} λ_i over the increasing eigenvalues.
double lemma2_lower_bound(std::span<const double> increasing, std::size_t s, std::size_t kappa);
inline double lemma2_lower_bound(const Spectrum& spectrum, std::size_t s, std::size_t kappa) {
  return lemma2_lower_bound(spectrum.values(), s, kappa);
}

/// Σ_{i,j} |a_i† b_j|² between two column groups.
double overlap_count(const ComplexMatrix& group_a, const ComplexMatrix& group_b);

}  // namespace qmarg
