#include "qmarg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmarg/errors.hpp"

namespace qmarg {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ArgumentError("ComplexMatrix: expected " + std::to_string(rows_ * cols_) +
                        " entries, got " + std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw ArgumentError("ComplexMatrix::columns: range out of bounds");
  ComplexMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ArgumentError("ComplexMatrix: shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ArgumentError("ComplexMatrix: shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw ArgumentError("ComplexMatrix: shape mismatch in *");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

double orthonormality_defect(const ComplexMatrix& u) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.cols(); ++i) {
    for (std::size_t j = 0; j < u.cols(); ++j) {
      Complex dot = 0.0;
      for (std::size_t k = 0; k < u.rows(); ++k) dot += std::conj(u(k, i)) * u(k, j);
      if (i == j) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double asymmetry_tol) : m_(m) {
  if (!m.is_square() || m.rows() == 0) throw ArgumentError("HermitianMatrix: matrix must be square and non-empty");
  const double scale = std::max(1.0, m.max_abs());
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Complex upper = m(i, j);
      const Complex lower = std::conj(m(j, i));
      if (std::abs(upper - lower) > asymmetry_tol * scale) {
        throw ArgumentError("HermitianMatrix: asymmetry " + std::to_string(std::abs(upper - lower)) +
                            " at (" + std::to_string(i) + "," + std::to_string(j) + ") exceeds tolerance");
      }
      const Complex avg = 0.5 * (upper + lower);
      if (i == j) {
        m_(i, i) = avg.real();
      } else {
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  return HermitianMatrix(ComplexMatrix::diagonal(values));
}

Isometry::Isometry(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.cols() > m_.rows()) throw ArgumentError("Isometry: more columns than rows");
  const double defect = orthonormality_defect(m_);
  if (defect > kTolerance) {
    throw ArgumentError("Isometry: columns not orthonormal (defect " + std::to_string(defect) + ")");
  }
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary G = diag(1, e^{-iφ}) · R(θ) acting on the
// (p,q) plane, where a(p,q) = |a(p,q)| e^{iφ}.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix* v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double magnitude = std::abs(apq);
  if (magnitude == 0.0) return;
  const Complex phase = apq / magnitude;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * magnitude);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // Columns of G restricted to the (p,q) plane.
  const Complex g_pp = c;
  const Complex g_qp = -s * std::conj(phase);
  const Complex g_pq = s;
  const Complex g_qq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * g_pp + akq * g_qp;
    a(k, q) = akp * g_pq + akq * g_qq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  if (v != nullptr) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex vkp = (*v)(k, p);
      const Complex vkq = (*v)(k, q);
      (*v)(k, p) = vkp * g_pp + vkq * g_qp;
      (*v)(k, q) = vkp * g_pq + vkq * g_qq;
    }
  }
}

EigenDecomposition jacobi(const HermitianMatrix& input, const JacobiOptions& options, bool want_vectors) {
  ComplexMatrix a = input.matrix();
  const std::size_t n = a.rows();
  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};
  ComplexMatrix* vp = want_vectors ? &v : nullptr;

  const double threshold = options.rel_tol * a.frobenius_norm();
  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > threshold) {
    if (sweep == options.max_sweeps) {
      throw ConvergenceError("eigh: Jacobi did not converge in " + std::to_string(options.max_sweeps) +
                                 " sweeps (off-diagonal norm " + std::to_string(off) + ")",
                             off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, vp, p, q);
    off = off_diagonal_norm(a);
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]).real();
  if (want_vectors) {
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = v(k, order[col]);
  }
  return out;
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& a, const JacobiOptions& options) {
  return jacobi(a, options, true);
}

std::vector<double> eigvalsh(const HermitianMatrix& a, const JacobiOptions& options) {
  return jacobi(a, options, false).values;
}

QrResult qr(const ComplexMatrix& input) {
  const std::size_t m = input.rows();
  const std::size_t n = input.cols();
  if (m < n || n == 0) throw ArgumentError("qr: need rows >= cols >= 1");

  ComplexMatrix a = input;
  std::vector<std::vector<Complex>> reflectors(n);
  std::vector<bool> active(n, false);

  for (std::size_t k = 0; k < n; ++k) {
    double norm_sq = 0.0;
    for (std::size_t i = k; i < m; ++i) norm_sq += std::norm(a(i, k));
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) continue;

    const Complex x0 = a(k, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * norm;

    std::vector<Complex> w(m - k);
    for (std::size_t i = k; i < m; ++i) w[i - k] = a(i, k);
    w[0] -= alpha;
    double w_norm_sq = 0.0;
    for (const auto& z : w) w_norm_sq += std::norm(z);
    if (w_norm_sq == 0.0) continue;
    const double w_norm = std::sqrt(w_norm_sq);
    for (auto& z : w) z /= w_norm;

    // a ← (I − 2 w w†) a on rows k.., columns k..
    for (std::size_t j = k; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += std::conj(w[i - k]) * a(i, j);
      for (std::size_t i = k; i < m; ++i) a(i, j) -= 2.0 * w[i - k] * dot;
    }
    reflectors[k] = std::move(w);
    active[k] = true;
  }

  QrResult out{ComplexMatrix(m, n), ComplexMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = a(i, j);

  // Q = H_0 H_1 ⋯ H_{n−1} applied to the first n columns of the identity.
  for (std::size_t j = 0; j < n; ++j) out.q(j, j) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    if (!active[kk]) continue;
    const auto& w = reflectors[kk];
    for (std::size_t j = 0; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = kk; i < m; ++i) dot += std::conj(w[i - kk]) * out.q(i, j);
      for (std::size_t i = kk; i < m; ++i) out.q(i, j) -= 2.0 * w[i - kk] * dot;
    }
  }
  return out;
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  const double scale = std::sqrt(0.5);
  for (auto& z : g.entries()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(re * scale, im * scale);
  }
  return g;
}

namespace {

ComplexMatrix haar_columns(std::size_t n, std::size_t r, Rng& rng) {
  auto [q, rr] = qr(ginibre(n, r, rng));
  for (std::size_t j = 0; j < r; ++j) {
    const Complex d = rr(j, j);
    const Complex phase = std::abs(d) == 0.0 ? Complex(1.0) : d / std::abs(d);
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= phase;
  }
  return q;
}

}  // namespace

ComplexMatrix qr_haar_unitary(std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("qr_haar_unitary: n must be positive");
  return haar_columns(n, n, rng);
}

Isometry random_isometry(std::size_t n, std::size_t r, Rng& rng) {
  if (r == 0 || r > n) throw ArgumentError("random_isometry: need 1 <= r <= n");
  return Isometry(haar_columns(n, r, rng));
}

double compressed_trace(const HermitianMatrix& a, const ComplexMatrix& v) {
  if (v.rows() != a.dim()) throw ArgumentError("compressed_trace: row count must match matrix dimension");
  const std::size_t n = a.dim();
  double total = 0.0;
  std::vector<Complex> av(n);
  for (std::size_t col = 0; col < v.cols(); ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * v(k, col);
      av[i] = s;
    }
    Complex dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += std::conj(v(i, col)) * av[i];
    total += dot.real();
  }
  return total;
}

TraceMinimum min_trace_isometry(const HermitianMatrix& a, std::size_t r) {
  if (r == 0 || r > a.dim()) {
    throw ArgumentError("min_trace_isometry: r=" + std::to_string(r) + " outside [1, " +
                        std::to_string(a.dim()) + "]");
  }
  const auto eig = eigh(a);
  return TraceMinimum{prefix_sum(eig.values, r), Isometry(eig.vectors.columns(0, r))};
}

double prefix_sum(std::span<const double> increasing, std::size_t k) {
  if (k > increasing.size()) {
    throw ArgumentError("prefix_sum: k=" + std::to_string(k) + " exceeds length " +
                        std::to_string(increasing.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += increasing[i];
  return s;
}

Spectrum::Spectrum(std::vector<double> values, double zero_clamp, double sum_tol) : values_(std::move(values)) {
  if (values_.empty()) throw ArgumentError("Spectrum: empty");
  std::sort(values_.begin(), values_.end());
  if (!std::isfinite(values_.front()) || !std::isfinite(values_.back())) {
    throw ArgumentError("Spectrum: non-finite entry");
  }
  if (values_.front() < -zero_clamp) {
    throw PsdViolation("Spectrum: eigenvalue " + std::to_string(values_.front()) + " below -" +
                           std::to_string(zero_clamp),
                       values_.front());
  }
  for (auto& v : values_) {
    if (v < 0.0) v = 0.0;
  }
  const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
  if (std::abs(total - 1.0) > sum_tol) {
    throw ArgumentError("Spectrum: entries sum to " + std::to_string(total) + ", expected 1");
  }
}

double lemma2_lower_bound(std::span<const double> increasing, std::size_t s, std::size_t kappa) {
  if (kappa > s || s - kappa > increasing.size() || kappa > increasing.size()) {
    throw ArgumentError("lemma2_lower_bound: need kappa <= s, s - kappa <= n, kappa <= n");
  }
  return prefix_sum(increasing, kappa) + prefix_sum(increasing, s - kappa);
}

double overlap_count(const ComplexMatrix& group_a, const ComplexMatrix& group_b) {
  if (group_a.rows() != group_b.rows()) throw ArgumentError("overlap_count: row mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < group_a.cols(); ++i) {
    for (std::size_t j = 0; j < group_b.cols(); ++j) {
      Complex dot = 0.0;
      for (std::size_t k = 0; k < group_a.rows(); ++k) dot += std::conj(group_a(k, i)) * group_b(k, j);
      total += std::norm(dot);
    }
  }
  return total;
}

}  // namespace qmarg
