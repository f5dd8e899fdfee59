#include "qmarg/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmarg/errors.hpp"

namespace qmarg {

SubsystemDims::SubsystemDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ArgumentError("SubsystemDims: need at least one subsystem");
  for (const auto d : dims_) {
    if (d == 0) throw ArgumentError("SubsystemDims: dimensions must be positive");
    total_ *= d;
  }
}

std::size_t SubsystemDims::stride(std::size_t k) const {
  if (k >= dims_.size()) throw ArgumentError("SubsystemDims::stride: index out of range");
  std::size_t s = 1;
  for (std::size_t j = k + 1; j < dims_.size(); ++j) s *= dims_[j];
  return s;
}

std::size_t SubsystemDims::product_of(std::span<const std::size_t> subsystems) const {
  std::size_t p = 1;
  for (const auto k : subsystems) p *= dims_.at(k);
  return p;
}

SubsetSpec::SubsetSpec(std::vector<std::size_t> keep, const SubsystemDims& dims) : keep_(std::move(keep)) {
  if (keep_.empty()) throw ArgumentError("SubsetSpec: keep list is empty");
  std::sort(keep_.begin(), keep_.end());
  if (std::adjacent_find(keep_.begin(), keep_.end()) != keep_.end()) {
    throw ArgumentError("SubsetSpec: duplicate subsystem index");
  }
  if (keep_.back() >= dims.count()) {
    throw ArgumentError("SubsetSpec: subsystem index " + std::to_string(keep_.back()) + " out of range for " +
                        std::to_string(dims.count()) + " subsystems");
  }
}

DensityMatrix::DensityMatrix(SubsystemDims dims, HermitianMatrix mat, bool)
    : dims_(std::move(dims)), mat_(std::move(mat)) {
  if (dims_.total() != mat_.dim()) {
    throw ArgumentError("DensityMatrix: matrix dimension " + std::to_string(mat_.dim()) +
                        " does not match product of dims " + std::to_string(dims_.total()));
  }
}

DensityMatrix::DensityMatrix(SubsystemDims dims, HermitianMatrix mat, const StateTolerances& tol)
    : DensityMatrix(std::move(dims), std::move(mat), true) {
  const double tr = mat_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw ArgumentError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
  }
  const auto values = eigvalsh(mat_);
  if (values.front() < -tol.psd) {
    throw PsdViolation("DensityMatrix: eigenvalue " + std::to_string(values.front()) + " is negative",
                       values.front());
  }
}

DensityMatrix DensityMatrix::trusted(SubsystemDims dims, HermitianMatrix mat) {
  return DensityMatrix(std::move(dims), std::move(mat), true);
}

Spectrum DensityMatrix::spectrum() const { return Spectrum(eigvalsh(mat_)); }

namespace {

// Global offsets contributed by every multi-index over `subsystems`, in
// row-major order over those subsystems.
std::vector<std::size_t> offsets(const SubsystemDims& dims, std::span<const std::size_t> subsystems) {
  std::vector<std::size_t> out{0};
  for (const auto k : subsystems) {
    const std::size_t stride = dims.stride(k);
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[k]);
    for (const auto base : out)
      for (std::size_t i = 0; i < dims[k]; ++i) next.push_back(base + i * stride);
    out = std::move(next);
  }
  return out;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsetSpec& spec) {
  const auto& dims = rho.dims();
  for (const auto k : spec.keep()) {
    if (k >= dims.count()) throw ArgumentError("partial_trace: subset does not match state dims");
  }
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.count(); ++k) {
    if (!std::binary_search(spec.keep().begin(), spec.keep().end(), k)) traced.push_back(k);
  }
  const auto kept_off = offsets(dims, spec.keep());
  const auto traced_off = offsets(dims, traced);

  const auto& m = rho.matrix().matrix();
  const std::size_t d = kept_off.size();
  ComplexMatrix out(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      Complex s = 0.0;
      for (const auto t : traced_off) s += m(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = s;
    }
  }
  std::vector<std::size_t> kept_dims;
  for (const auto k : spec.keep()) kept_dims.push_back(dims[k]);
  return DensityMatrix::trusted(SubsystemDims(std::move(kept_dims)), HermitianMatrix(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims(a.dims().values().begin(), a.dims().values().end());
  dims.insert(dims.end(), b.dims().values().begin(), b.dims().values().end());
  return DensityMatrix::trusted(SubsystemDims(std::move(dims)),
                                HermitianMatrix(kron(a.matrix().matrix(), b.matrix().matrix())));
}

namespace {

// ρ = Σ_k w_k |u_k⟩⟨u_k| over the columns of `basis`.
ComplexMatrix weighted_projector(const ComplexMatrix& basis, std::span<const double> weights) {
  const std::size_t n = basis.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    if (weights[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex ui = weights[k] * basis(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += ui * std::conj(basis(j, k));
    }
  }
  return out;
}

}  // namespace

DensityMatrix random_fixed_spectrum_state(const SubsystemDims& dims, const Spectrum& spectrum, Rng& rng) {
  if (spectrum.size() != dims.total()) {
    throw ArgumentError("random_fixed_spectrum_state: spectrum length " + std::to_string(spectrum.size()) +
                        " != " + std::to_string(dims.total()));
  }
  const auto u = qr_haar_unitary(dims.total(), rng);
  return DensityMatrix::trusted(dims, HermitianMatrix(weighted_projector(u, spectrum.values())));
}

std::vector<Complex> random_pure_vector(std::size_t dim, Rng& rng) {
  std::vector<Complex> psi(dim);
  double norm_sq = 0.0;
  while (norm_sq == 0.0) {
    norm_sq = 0.0;
    for (auto& z : psi) {
      const double re = rng.normal();
      const double im = rng.normal();
      z = Complex(re, im);
      norm_sq += std::norm(z);
    }
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& z : psi) z *= inv;
  return psi;
}

DensityMatrix pure_state(const SubsystemDims& dims, std::span<const Complex> psi) {
  if (psi.size() != dims.total()) throw ArgumentError("pure_state: vector length does not match dims");
  double norm_sq = 0.0;
  for (const auto& z : psi) norm_sq += std::norm(z);
  if (norm_sq == 0.0) throw ArgumentError("pure_state: zero vector");
  const double inv = 1.0 / norm_sq;
  const std::size_t n = psi.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = inv * psi[i] * std::conj(psi[j]);
  return DensityMatrix::trusted(dims, HermitianMatrix(m));
}

DensityMatrix random_pure_state(const SubsystemDims& dims, Rng& rng) {
  return pure_state(dims, random_pure_vector(dims.total(), rng));
}

std::vector<double> random_simplex_point(std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("random_simplex_point: n must be positive");
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = rng.exponential();
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

std::size_t numerical_rank(std::span<const double> eigenvalues, double rel_tol) {
  if (eigenvalues.empty()) return 0;
  const double largest = *std::max_element(eigenvalues.begin(), eigenvalues.end());
  if (largest <= 0.0) return 0;
  const double cut = rel_tol * largest;
  return static_cast<std::size_t>(
      std::count_if(eigenvalues.begin(), eigenvalues.end(), [cut](double v) { return v > cut; }));
}

std::size_t numerical_rank(const DensityMatrix& rho, double rel_tol) {
  return numerical_rank(eigvalsh(rho.matrix()), rel_tol);
}

TripartiteRanks measure_ranks(const DensityMatrix& rho, double rel_tol) {
  if (rho.dims().count() != 3) throw ArgumentError("measure_ranks: expected three subsystems");
  TripartiteRanks r;
  r.abc = numerical_rank(rho, rel_tol);
  r.ab = numerical_rank(partial_trace(rho, SubsetSpec({0, 1}, rho.dims())), rel_tol);
  r.bc = numerical_rank(partial_trace(rho, SubsetSpec({1, 2}, rho.dims())), rel_tol);
  r.b = numerical_rank(partial_trace(rho, SubsetSpec({1}, rho.dims())), rel_tol);
  return r;
}

namespace {

using Vec = std::vector<Complex>;

Complex dot(const Vec& a, const Vec& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Two-pass Gram-Schmidt; returns false (and leaves basis untouched) when `v`
// is numerically inside span(basis).
bool append_orthonormal(std::vector<Vec>& basis, Vec v, double drop_tol = 1e-8) {
  double original = std::sqrt(dot(v, v).real());
  if (original == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const Complex c = dot(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  }
  const double norm = std::sqrt(dot(v, v).real());
  if (norm <= drop_tol * original) return false;
  for (auto& z : v) z /= norm;
  basis.push_back(std::move(v));
  return true;
}

Vec gaussian_vector(std::size_t n, Rng& rng) {
  Vec v(n);
  for (auto& z : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(re, im);
  }
  return v;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

Vec unit_vector(std::size_t n, std::size_t k) {
  Vec e(n);
  e[k] = 1.0;
  return e;
}

// Adds random vectors orthogonal to `basis` until it has `target` members.
void extend_randomly(std::vector<Vec>& basis, std::size_t dim, std::size_t target, Rng& rng) {
  while (basis.size() < target) append_orthonormal(basis, gaussian_vector(dim, rng));
}

struct PlantedKernels {
  std::vector<Vec> ab;  // in C^{LM}
  std::vector<Vec> bc;  // in C^{MN}
};

PlantedKernels plant_kernels(std::size_t l, std::size_t m, std::size_t n, std::size_t t, std::size_t ab_def,
                             std::size_t bc_def, Rng& rng) {
  std::vector<Vec> kb;
  extend_randomly(kb, m, t, rng);

  PlantedKernels k;
  for (const auto& b : kb)
    for (std::size_t a = 0; a < l; ++a) append_orthonormal(k.ab, kron_vec(unit_vector(l, a), b));
  for (const auto& b : kb)
    for (std::size_t c = 0; c < n; ++c) append_orthonormal(k.bc, kron_vec(b, unit_vector(n, c)));
  extend_randomly(k.ab, l * m, ab_def, rng);
  extend_randomly(k.bc, m * n, bc_def, rng);
  return k;
}

// Orthonormal basis of span(C^L ⊗ K_BC, K_AB ⊗ C^N).
std::vector<Vec> induced_kernel(std::size_t l, std::size_t n, const PlantedKernels& k) {
  std::vector<Vec> f;
  for (std::size_t a = 0; a < l; ++a)
    for (const auto& v : k.bc) append_orthonormal(f, kron_vec(unit_vector(l, a), v));
  for (const auto& v : k.ab)
    for (std::size_t c = 0; c < n; ++c) append_orthonormal(f, kron_vec(v, unit_vector(n, c)));
  return f;
}

}  // namespace

EngineeredState engineered_support_state(const SubsystemDims& dims, std::size_t ab_deficiency,
                                         std::size_t bc_deficiency, Rng& rng, double rank_tol) {
  if (dims.count() != 3) throw ArgumentError("engineered_support_state: expected three subsystems");
  const std::size_t l = dims[0], m = dims[1], n = dims[2];
  if (ab_deficiency >= l * m || bc_deficiency >= m * n || n * ab_deficiency > l * bc_deficiency) {
    throw ArgumentError("engineered_support_state: need r < LM, s < MN and N r <= L s");
  }
  const std::size_t total = l * m * n;

  const std::size_t t_max = std::min(ab_deficiency / l, bc_deficiency / n);
  const std::size_t t = static_cast<std::size_t>(rng.below(t_max + 1));

  // Extras beyond the product-structured part can make the induced kernel
  // fill the whole space; shed them one at a time, larger side first.
  std::size_t ab_def = ab_deficiency, bc_def = bc_deficiency;
  auto kernels = plant_kernels(l, m, n, t, ab_def, bc_def, rng);
  auto forbidden = induced_kernel(l, n, kernels);
  while (forbidden.size() >= total) {
    const std::size_t ab_extra = ab_def - l * t, bc_extra = bc_def - n * t;
    if (ab_extra >= bc_extra) {
      --ab_def;
    } else {
      --bc_def;
    }
    kernels = plant_kernels(l, m, n, t, ab_def, bc_def, rng);
    forbidden = induced_kernel(l, n, kernels);
  }

  std::vector<Vec> support = forbidden;
  extend_randomly(support, total, total, rng);
  const std::size_t rank = total - forbidden.size();

  ComplexMatrix basis(total, rank);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < total; ++i) basis(i, k) = support[forbidden.size() + k][i];
  const ComplexMatrix mixed_basis = basis * qr_haar_unitary(rank, rng);

  // Weights bounded away from zero so the planted rank survives the rank threshold.
  std::vector<double> weights(rank);
  double sum = 0.0;
  for (auto& w : weights) {
    w = 1.0 + rng.uniform();
    sum += w;
  }
  for (auto& w : weights) w /= sum;

  auto state = DensityMatrix::trusted(dims, HermitianMatrix(weighted_projector(mixed_basis, weights)));
  const auto achieved = measure_ranks(state, rank_tol);
  return EngineeredState{std::move(state), achieved, t, ab_def, bc_def};
}

}  // namespace qmarg
