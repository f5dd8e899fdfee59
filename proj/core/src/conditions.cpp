#include "qmarg/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "qmarg/errors.hpp"
#include "qmarg/majorization.hpp"

namespace qmarg {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kSatisfied: return "satisfied";
    case Verdict::kEqualityWithinTol: return "equality-within-tol";
    case Verdict::kViolated: return "violated";
  }
  return "?";
}

std::string_view to_string(RecordRole r) {
  return r == RecordRole::kNecessary ? "necessary" : "sufficiency-only";
}

std::string_view to_string(Overall o) {
  return o == Overall::kCompatibleNecessary ? "compatible-necessary" : "incompatible";
}

std::string_view to_string(SufficiencyClaim c) {
  return c == SufficiencyClaim::kNecessaryOnly ? "necessary-only" : "claimed-sufficient";
}

std::string_view to_string(RankStatus s) {
  switch (s) {
    case RankStatus::kNotApplicable: return "not-applicable";
    case RankStatus::kSatisfied: return "satisfied";
    case RankStatus::kViolated: return "violated";
  }
  return "?";
}

Verdict classify(double slack, double tol) {
  if (slack < -tol) return Verdict::kViolated;
  if (slack <= tol) return Verdict::kEqualityWithinTol;
  return Verdict::kSatisfied;
}

const InequalityRecord* CompatReport::find(std::string_view name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(double tol) : tol_(tol) {}

  void geq(std::string name, double lhs, double rhs, RecordRole role = RecordRole::kNecessary) {
    push(std::move(name), lhs, rhs, lhs - rhs, role);
  }

  void equal(std::string name, double lhs, double rhs) {
    push(std::move(name), lhs, rhs, 0.0 - std::abs(lhs - rhs), RecordRole::kNecessary);
  }

  // blocks ≻ marginal: Σ_k marginal ≥ Σ_k blocks for k < n, totals equal.
  void majorization(const std::string& prefix, std::span<const double> blocks, std::span<const double> marginal) {
    if (blocks.size() != marginal.size()) {
      throw ArgumentError(prefix + ": block vector length " + std::to_string(blocks.size()) +
                          " does not match marginal length " + std::to_string(marginal.size()));
    }
    std::vector<double> ys(blocks.begin(), blocks.end());
    std::sort(ys.begin(), ys.end());
    for (std::size_t k = 1; k < marginal.size(); ++k) {
      geq(prefix + "[k=" + std::to_string(k) + "]", prefix_sum(marginal, k), prefix_sum(ys, k));
    }
    equal(prefix + "[total]", prefix_sum(marginal, marginal.size()), prefix_sum(ys, ys.size()));
  }

  CompatReport finish(SufficiencyClaim claim) && {
    CompatReport report;
    report.tolerance = tol_;
    report.sufficiency = claim;
    report.min_slack = std::numeric_limits<double>::infinity();
    bool all_hold = true;
    for (const auto& r : records_) {
      if (r.verdict == Verdict::kViolated) all_hold = false;
      if (r.role != RecordRole::kNecessary) continue;
      report.min_slack = std::min(report.min_slack, r.slack);
      if (r.verdict == Verdict::kViolated) report.overall = Overall::kIncompatible;
    }
    if (records_.empty()) report.min_slack = 0.0;
    report.sufficient_conditions_hold = claim == SufficiencyClaim::kClaimedSufficient && all_hold;
    report.records = std::move(records_);
    return report;
  }

 private:
  void push(std::string name, double lhs, double rhs, double slack, RecordRole role) {
    records_.push_back(InequalityRecord{std::move(name), lhs, rhs, slack, classify(slack, tol_), role});
  }

  double tol_;
  std::vector<InequalityRecord> records_;
};

void require_length(const Spectrum& s, std::size_t n, const char* what) {
  if (s.size() != n) {
    throw ArgumentError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                        std::to_string(s.size()));
  }
}

}  // namespace

CompatReport check_two_qubit(const Spectrum& a, const Spectrum& b, const Spectrum& ab, const CheckOptions& options) {
  require_length(a, 2, "check_two_qubit: spectrum A");
  require_length(b, 2, "check_two_qubit: spectrum B");
  require_length(ab, 4, "check_two_qubit: spectrum AB");

  ReportBuilder out(options.tol);
  out.geq("two_qubit.smallest_A", a[0], ab[0] + ab[1]);
  out.geq("two_qubit.smallest_B", b[0], ab[0] + ab[1]);
  // Same prefix-sum form as the bipartite cross record, so the two agree bit for bit.
  out.geq("two_qubit.smallest_sum", a[0] + b[0], ab.prefix(3) + ab.prefix(1));
  out.geq("two_qubit.smallest_gap", std::min(ab[2] - ab[0], ab[3] - ab[1]), std::abs(a[0] - b[0]),
          RecordRole::kSufficiencyOnly);
  return std::move(out).finish(SufficiencyClaim::kClaimedSufficient);
}

CompatReport check_bipartite(const Spectrum& a, const Spectrum& b, const Spectrum& ab, const CheckOptions& options) {
  const std::size_t l = a.size();
  const std::size_t n = b.size();
  require_length(ab, l * n, "check_bipartite: spectrum AB");

  ReportBuilder out(options.tol);
  out.majorization("bipartite.blocks_A", block_sums(ab, n).values, a.values());
  out.majorization("bipartite.blocks_B", block_sums(ab, l).values, b.values());
  for (std::size_t k = 1; k < l; ++k) {
    for (std::size_t m = 1; m < n; ++m) {
      const double lhs = a.prefix(k) + b.prefix(m);
      const double rhs = ab.prefix(k * n + m * l - k * m) + ab.prefix(k * m);
      out.geq("bipartite.cross[k=" + std::to_string(k) + ",l=" + std::to_string(m) + "]", lhs, rhs);
    }
  }
  return std::move(out).finish(SufficiencyClaim::kNecessaryOnly);
}

CompatReport check_tripartite(const Spectrum& ab, const Spectrum& bc, const Spectrum& b, const Spectrum& abc,
                              const SubsystemDims& dims, const CheckOptions& options) {
  if (dims.count() != 3) throw ArgumentError("check_tripartite: expected three subsystem dimensions");
  const std::size_t l = dims[0], m = dims[1], n = dims[2];
  require_length(ab, l * m, "check_tripartite: spectrum AB");
  require_length(bc, m * n, "check_tripartite: spectrum BC");
  require_length(b, m, "check_tripartite: spectrum B");
  require_length(abc, l * m * n, "check_tripartite: spectrum ABC");

  ReportBuilder out(options.tol);
  out.majorization("tripartite.blocks_AB", block_sums(abc, n).values, ab.values());
  out.majorization("tripartite.blocks_BC", block_sums(abc, l).values, bc.values());
  out.majorization("tripartite.blocks_B_via_BC", block_sums(bc, n).values, b.values());
  out.majorization("tripartite.blocks_B_via_AB", block_sums(ab, l).values, b.values());
  for (std::size_t mu = 0; mu < m; ++mu) {
    for (std::size_t r = 0; r < l; ++r) {
      for (std::size_t s = 0; s < n; ++s) {
        if (mu == 0 && r == 0 && s == 0) continue;
        const double lhs = ab.prefix(mu * l + r) + bc.prefix(mu * n + s);
        const double rhs = abc.prefix(mu * l * n + n * r + l * s - r * s) + abc.prefix(mu * l * n + r * s);
        out.geq("tripartite.cross[mu=" + std::to_string(mu) + ",r=" + std::to_string(r) + ",s=" +
                    std::to_string(s) + "]",
                lhs, rhs);
      }
    }
  }
  return std::move(out).finish(SufficiencyClaim::kNecessaryOnly);
}

long long rank_bracket(long long numerator, long long denominator, BracketConvention convention) {
  if (denominator <= 0) throw ArgumentError("rank_bracket: denominator must be positive");
  long long q = numerator / denominator;
  const long long rem = numerator % denominator;
  if (rem != 0 && numerator < 0) --q;  // floor toward −∞
  if (convention == BracketConvention::kStrictlyLess && rem == 0) --q;
  return q;
}

namespace {

// Orientation with `first_pair_rank` the rank of the two-party reduction
// containing the first party (dimension l_first) and `last_pair_rank` that
// containing the last (dimension n_last).
RankOrientation evaluate_orientation(std::string name, std::size_t abc_rank, std::size_t first_pair_rank,
                                     std::size_t last_pair_rank, std::size_t b_rank, long long l_first,
                                     long long m, long long n_last, BracketConvention convention) {
  RankOrientation o;
  o.name = std::move(name);
  o.r = l_first * m - static_cast<long long>(first_pair_rank);
  o.s = m * n_last - static_cast<long long>(last_pair_rank);
  o.t = m - static_cast<long long>(b_rank);
  o.bound = rank_bracket(o.r - 1, l_first, convention) + 1;

  const long long expected_abc = l_first * m * n_last - l_first * o.s;
  if (static_cast<long long>(abc_rank) != expected_abc) {
    o.reason = "rank(ABC)=" + std::to_string(abc_rank) + " differs from LMN-Ls=" + std::to_string(expected_abc);
    return o;
  }
  if (n_last * o.r > l_first * o.s) {
    o.reason = "Nr=" + std::to_string(n_last * o.r) + " exceeds Ls=" + std::to_string(l_first * o.s);
    return o;
  }
  o.status = o.t <= o.bound ? RankStatus::kSatisfied : RankStatus::kViolated;
  o.reason = "t=" + std::to_string(o.t) + (o.t <= o.bound ? " <= " : " > ") + "bound=" + std::to_string(o.bound);
  return o;
}

}  // namespace

RankTheoremReport check_rank_theorem(const TripartiteRanks& ranks, const SubsystemDims& dims,
                                     BracketConvention convention) {
  if (dims.count() != 3) throw ArgumentError("check_rank_theorem: expected three subsystem dimensions");
  const auto l = static_cast<long long>(dims[0]);
  const auto m = static_cast<long long>(dims[1]);
  const auto n = static_cast<long long>(dims[2]);
  auto in_range = [](std::size_t rank, long long size) {
    return rank >= 1 && static_cast<long long>(rank) <= size;
  };
  if (!in_range(ranks.abc, l * m * n) || !in_range(ranks.ab, l * m) || !in_range(ranks.bc, m * n) ||
      !in_range(ranks.b, m)) {
    throw ArgumentError("check_rank_theorem: ranks must lie in [1, matrix size]");
  }

  RankTheoremReport report;
  report.orientations[0] =
      evaluate_orientation("direct", ranks.abc, ranks.ab, ranks.bc, ranks.b, l, m, n, convention);
  report.orientations[1] =
      evaluate_orientation("exchanged", ranks.abc, ranks.bc, ranks.ab, ranks.b, n, m, l, convention);
  for (const auto& o : report.orientations) {
    if (o.status == RankStatus::kViolated) {
      report.status = RankStatus::kViolated;
    } else if (o.status == RankStatus::kSatisfied && report.status == RankStatus::kNotApplicable) {
      report.status = RankStatus::kSatisfied;
    }
  }
  return report;
}

CompatReport check_pure_multipartite(std::span<const Spectrum> spectra, const CheckOptions& options) {
  const std::size_t parties = spectra.size();
  if (parties < 2) throw ArgumentError("check_pure_multipartite: need at least two parties");
  const std::size_t m = spectra[0].size();
  for (const auto& s : spectra) {
    if (s.size() != m) throw ArgumentError("check_pure_multipartite: spectra have different lengths");
  }

  std::vector<double> all_but_largest(parties);
  for (std::size_t j = 0; j < parties; ++j) all_but_largest[j] = spectra[j].prefix(m - 1);

  ReportBuilder out(options.tol);
  for (std::size_t k = 0; k < parties; ++k) {
    for (std::size_t l = 0; l < parties; ++l) {
      if (k == l) continue;
      double others = 0.0;
      for (std::size_t j = 0; j < parties; ++j)
        if (j != k && j != l) others += all_but_largest[j];
      for (std::size_t p = 1; p < m; ++p) {
        out.geq("pure.chain[k=" + std::to_string(k) + ",l=" + std::to_string(l) + ",p=" + std::to_string(p) + "]",
                others + spectra[k].prefix(p), spectra[l].prefix(p));
      }
    }
  }
  return std::move(out).finish(SufficiencyClaim::kNecessaryOnly);
}

namespace {

// Σ coef_x·λ↑(X) ≤ Σ coef_y·λ↑(Y) + Σ coef_z·λ↑(Z).
struct QutritInequality {
  std::array<int, 3> x, y, z;
};

constexpr std::array<QutritInequality, 7> kQutritInequalities{{
    {{1, 1, 0}, {1, 1, 0}, {1, 1, 0}},
    {{1, 0, 1}, {1, 1, 0}, {1, 0, 1}},
    {{0, 1, 1}, {1, 1, 0}, {0, 1, 1}},
    {{1, 2, 0}, {1, 2, 0}, {1, 2, 0}},
    {{2, 1, 0}, {1, 2, 0}, {2, 1, 0}},
    {{0, 2, 1}, {1, 2, 0}, {0, 2, 1}},
    {{0, 2, 1}, {2, 1, 0}, {0, 1, 2}},
}};

double weighted(const std::array<int, 3>& coef, const Spectrum& s) {
  return coef[0] * s[0] + coef[1] * s[1] + coef[2] * s[2];
}

}  // namespace

double three_qutrit_lipschitz() {
  int widest = 0;
  for (const auto& q : kQutritInequalities) {
    int sum = 0;
    for (int i = 0; i < 3; ++i) sum += q.x[i] + q.y[i] + q.z[i];
    widest = std::max(widest, sum);
  }
  return widest;
}

CompatReport check_three_qutrit_polytope(const Spectrum& a, const Spectrum& b, const Spectrum& c,
                                         const CheckOptions& options) {
  require_length(a, 3, "check_three_qutrit_polytope: spectrum A");
  require_length(b, 3, "check_three_qutrit_polytope: spectrum B");
  require_length(c, 3, "check_three_qutrit_polytope: spectrum C");
  const std::array<const Spectrum*, 3> party{&a, &b, &c};
  constexpr std::array<char, 3> kLabel{'A', 'B', 'C'};

  ReportBuilder out(options.tol);
  std::set<std::array<int, 9>> seen;
  for (std::size_t i = 0; i < kQutritInequalities.size(); ++i) {
    const auto& ineq = kQutritInequalities[i];
    std::array<int, 3> perm{0, 1, 2};
    do {
      // Canonical form: slack coefficients per (party, eigenvalue index).
      std::array<int, 9> canon{};
      for (int e = 0; e < 3; ++e) {
        canon[perm[0] * 3 + e] -= ineq.x[e];
        canon[perm[1] * 3 + e] += ineq.y[e];
        canon[perm[2] * 3 + e] += ineq.z[e];
      }
      if (!seen.insert(canon).second) continue;
      const double small_side = weighted(ineq.x, *party[perm[0]]);
      const double large_side = weighted(ineq.y, *party[perm[1]]) + weighted(ineq.z, *party[perm[2]]);
      std::string name = "qutrit.ineq" + std::to_string(i + 1) + "[";
      for (int p : perm) name += kLabel[p];
      name += "]";
      out.geq(std::move(name), large_side, small_side);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::move(out).finish(SufficiencyClaim::kClaimedSufficient);
}

}  // namespace qmarg
