#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qmarg/conditions.hpp"
#include "qmarg/errors.hpp"
#include "qmarg/qstate.hpp"

namespace qmarg {
namespace {

using V = std::vector<double>;

const InequalityRecord& record(const CompatReport& r, std::string_view name) {
  const auto* rec = r.find(name);
  if (rec == nullptr) throw std::runtime_error("missing record " + std::string(name));
  return *rec;
}

Spectrum uniform(std::size_t n) { return Spectrum(V(n, 1.0 / static_cast<double>(n))); }

TEST(Classify, Boundaries) {
  EXPECT_EQ(classify(0.0, 1e-8), Verdict::kEqualityWithinTol);
  EXPECT_EQ(classify(-1e-8, 1e-8), Verdict::kEqualityWithinTol);
  EXPECT_EQ(classify(-2e-8, 1e-8), Verdict::kViolated);
  EXPECT_EQ(classify(2e-8, 1e-8), Verdict::kSatisfied);
}

TEST(TwoQubit, MaximallyMixed) {
  const auto r = check_two_qubit(uniform(2), uniform(2), uniform(4));
  EXPECT_TRUE(r.compatible());
  EXPECT_EQ(record(r, "two_qubit.smallest_A").slack, 0.0);
  EXPECT_EQ(record(r, "two_qubit.smallest_B").verdict, Verdict::kEqualityWithinTol);
  EXPECT_EQ(r.sufficiency, SufficiencyClaim::kClaimedSufficient);
  EXPECT_TRUE(r.sufficient_conditions_hold);
}

TEST(TwoQubit, PureProduct) {
  const Spectrum pure2({0.0, 1.0});
  const auto r = check_two_qubit(pure2, pure2, Spectrum({0.0, 0.0, 0.0, 1.0}));
  EXPECT_TRUE(r.compatible());
  EXPECT_TRUE(r.sufficient_conditions_hold);
}

TEST(TwoQubit, PureMarginalOfMaximallyMixedFails) {
  const auto r = check_two_qubit(Spectrum({0.0, 1.0}), uniform(2), uniform(4));
  EXPECT_FALSE(r.compatible());
  const auto& a = record(r, "two_qubit.smallest_A");
  EXPECT_EQ(a.verdict, Verdict::kViolated);
  EXPECT_EQ(a.lhs, 0.0);
  EXPECT_EQ(a.rhs, 0.5);
}

TEST(TwoQubit, WernerHalf) {
  const auto r = check_two_qubit(uniform(2), uniform(2), Spectrum({0.125, 0.125, 0.125, 0.625}));
  EXPECT_EQ(record(r, "two_qubit.smallest_A").slack, 0.25);
  EXPECT_EQ(record(r, "two_qubit.smallest_A").verdict, Verdict::kSatisfied);
  EXPECT_TRUE(r.compatible());
}

TEST(TwoQubit, GapRecordOnlyAffectsSufficiency) {
  // Necessary records hold, the gap condition does not: |0.5 − 0| > min(0.3, 0.5).
  const auto r = check_two_qubit(Spectrum({0.5, 0.5}), Spectrum({0.0, 1.0}), Spectrum({0.0, 0.0, 0.3, 0.7}));
  EXPECT_EQ(record(r, "two_qubit.smallest_gap").role, RecordRole::kSufficiencyOnly);
  EXPECT_EQ(record(r, "two_qubit.smallest_gap").verdict, Verdict::kViolated);
  EXPECT_TRUE(r.compatible());
  EXPECT_FALSE(r.sufficient_conditions_hold);
}

TEST(TwoQubit, RejectsWrongLengths) {
  EXPECT_THROW(check_two_qubit(uniform(3), uniform(2), uniform(6)), ArgumentError);
  EXPECT_THROW(check_two_qubit(uniform(2), uniform(2), uniform(3)), ArgumentError);
}

TEST(TwoQubit, SwappingPartiesSwapsRecords) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const Spectrum a(random_simplex_point(2, rng)), b(random_simplex_point(2, rng)), ab(random_simplex_point(4, rng));
    const auto r1 = check_two_qubit(a, b, ab);
    const auto r2 = check_two_qubit(b, a, ab);
    EXPECT_EQ(record(r1, "two_qubit.smallest_A").slack, record(r2, "two_qubit.smallest_B").slack);
    EXPECT_EQ(record(r1, "two_qubit.smallest_B").slack, record(r2, "two_qubit.smallest_A").slack);
    EXPECT_EQ(record(r1, "two_qubit.smallest_sum").verdict, record(r2, "two_qubit.smallest_sum").verdict);
    EXPECT_EQ(record(r1, "two_qubit.smallest_gap").verdict, record(r2, "two_qubit.smallest_gap").verdict);
  }
}

TEST(Bipartite, BellState) {
  const auto r = check_bipartite(uniform(2), uniform(2), Spectrum({0.0, 0.0, 0.0, 1.0}));
  EXPECT_TRUE(r.compatible());
  EXPECT_EQ(record(r, "bipartite.blocks_A[k=1]").slack, 0.5);
  EXPECT_EQ(record(r, "bipartite.blocks_A[total]").verdict, Verdict::kEqualityWithinTol);
  EXPECT_EQ(record(r, "bipartite.blocks_B[total]").verdict, Verdict::kEqualityWithinTol);
  const auto& cross = record(r, "bipartite.cross[k=1,l=1]");
  EXPECT_EQ(cross.lhs, 1.0);
  EXPECT_EQ(cross.rhs, 0.0);
}

TEST(Bipartite, MaximallyMixedProductIsTight) {
  for (const auto& [l, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {2, 3}, {3, 3}, {3, 4}}) {
    const auto r = check_bipartite(uniform(l), uniform(n), uniform(l * n));
    for (const auto& rec : r.records) EXPECT_EQ(rec.verdict, Verdict::kEqualityWithinTol) << rec.name;
  }
}

TEST(Bipartite, RecordCountAndIndexRange) {
  for (std::size_t l = 1; l <= 5; ++l) {
    for (std::size_t n = 1; n <= 5; ++n) {
      CompatReport r;
      ASSERT_NO_THROW(r = check_bipartite(uniform(l), uniform(n), uniform(l * n)));
      EXPECT_EQ(r.records.size(), l + n + (l - 1) * (n - 1));
      for (std::size_t k = 1; k < l; ++k)
        for (std::size_t m = 1; m < n; ++m) EXPECT_LE(k * n + m * l - k * m, l * n - 1);
    }
  }
}

TEST(Bipartite, CrossRecordsMatchDirectSums) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_simplex_point(3, rng), b = random_simplex_point(4, rng), ab = random_simplex_point(12, rng);
    const auto r = check_bipartite(Spectrum(a), Spectrum(b), Spectrum(ab));
    for (std::size_t k = 1; k < 3; ++k) {
      for (std::size_t l = 1; l < 4; ++l) {
        const auto& rec = record(r, "bipartite.cross[k=" + std::to_string(k) + ",l=" + std::to_string(l) + "]");
        const double lhs = testing::smallest_sum(a, k) + testing::smallest_sum(b, l);
        const double rhs = testing::smallest_sum(ab, k * 4 + l * 3 - k * l) + testing::smallest_sum(ab, k * l);
        EXPECT_NEAR(rec.lhs, lhs, 1e-14);
        EXPECT_NEAR(rec.rhs, rhs, 1e-14);
      }
    }
  }
}

TEST(Bipartite, AgreesWithTwoQubitRecords) {
  Rng rng(3);
  const std::pair<const char*, const char*> pairs[] = {
      {"two_qubit.smallest_A", "bipartite.blocks_A[k=1]"},
      {"two_qubit.smallest_B", "bipartite.blocks_B[k=1]"},
      {"two_qubit.smallest_sum", "bipartite.cross[k=1,l=1]"},
  };
  for (int t = 0; t < 1000; ++t) {
    const bool real_state = t % 2 == 0;
    Spectrum a, b, ab;
    if (real_state) {
      const auto rho = random_fixed_spectrum_state({2, 2}, Spectrum(random_simplex_point(4, rng)), rng);
      a = partial_trace(rho, SubsetSpec({0}, rho.dims())).spectrum();
      b = partial_trace(rho, SubsetSpec({1}, rho.dims())).spectrum();
      ab = rho.spectrum();
    } else {
      a = Spectrum(random_simplex_point(2, rng));
      b = Spectrum(random_simplex_point(2, rng));
      ab = Spectrum(random_simplex_point(4, rng));
    }
    const auto two = check_two_qubit(a, b, ab);
    const auto bi = check_bipartite(a, b, ab);
    for (const auto& [tq, bp] : pairs) {
      const auto& x = record(two, tq);
      const auto& y = record(bi, bp);
      EXPECT_EQ(x.lhs, y.lhs);
      EXPECT_EQ(x.rhs, y.rhs);
      EXPECT_EQ(x.verdict, y.verdict);
    }
  }
}

TEST(Bipartite, RejectsLengthMismatch) {
  EXPECT_THROW(check_bipartite(uniform(2), uniform(3), uniform(5)), ArgumentError);
}

TEST(Tripartite, MaximallyMixed) {
  const auto r = check_tripartite(uniform(4), uniform(4), uniform(2), uniform(8), {2, 2, 2});
  EXPECT_TRUE(r.compatible());
  for (const auto& rec : r.records) EXPECT_NE(rec.verdict, Verdict::kViolated) << rec.name;
}

TEST(Tripartite, GhzClosedForm) {
  const Spectrum pair({0.0, 0.0, 0.5, 0.5});
  const auto r = check_tripartite(pair, pair, uniform(2), Spectrum({0, 0, 0, 0, 0, 0, 0, 1}), {2, 2, 2});
  EXPECT_TRUE(r.compatible());
  const auto& rec = record(r, "tripartite.cross[mu=0,r=1,s=1]");
  EXPECT_EQ(rec.lhs, 0.0);
  EXPECT_EQ(rec.rhs, 0.0);
  EXPECT_EQ(rec.verdict, Verdict::kEqualityWithinTol);
  // Every admissible (mu, r, s) except the origin appears exactly once.
  std::size_t cross = 0;
  for (const auto& x : r.records) cross += x.name.rfind("tripartite.cross", 0) == 0;
  EXPECT_EQ(cross, 7u);
  // Hand-computed: blocks of ABC over AB are (0, 0, 0, 1), so the first three
  // prefixes of AB (0, 0, 0.5) against (0, 0, 0).
  EXPECT_EQ(record(r, "tripartite.blocks_AB[k=3]").slack, 0.5);
  EXPECT_EQ(record(r, "tripartite.blocks_AB[k=2]").slack, 0.0);
  EXPECT_EQ(record(r, "tripartite.blocks_B_via_AB[k=1]").slack, 0.5);
  EXPECT_EQ(record(r, "tripartite.cross[mu=1,r=0,s=0]").lhs, 0.0);
  EXPECT_EQ(record(r, "tripartite.cross[mu=1,r=1,s=1]").lhs, 1.0);
  EXPECT_EQ(record(r, "tripartite.cross[mu=1,r=1,s=1]").rhs, 0.0);
}

TEST(Tripartite, IndexRangeForManyShapes) {
  for (std::size_t l = 1; l <= 3; ++l)
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; n <= 3; ++n) {
        CompatReport r;
        ASSERT_NO_THROW(r = check_tripartite(uniform(l * m), uniform(m * n), uniform(m), uniform(l * m * n), {l, m, n}));
        for (std::size_t mu = 0; mu < m; ++mu)
          for (std::size_t a = 0; a < l; ++a)
            for (std::size_t c = 0; c < n; ++c) EXPECT_LE(mu * l * n + n * a + l * c - a * c, l * m * n);
        EXPECT_TRUE(r.compatible());
      }
}

// Exchanging A and C maps the record set onto itself.
TEST(Tripartite, ExchangeSymmetry) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const Spectrum ab(random_simplex_point(6, rng)), bc(random_simplex_point(6, rng)), b(random_simplex_point(3, rng)),
        abc(random_simplex_point(12, rng));
    const auto direct = check_tripartite(ab, bc, b, abc, {2, 3, 2});
    const auto swapped = check_tripartite(bc, ab, b, abc, {2, 3, 2});
    EXPECT_EQ(direct.overall, swapped.overall);
    EXPECT_EQ(record(direct, "tripartite.blocks_B_via_AB[k=1]").slack,
              record(swapped, "tripartite.blocks_B_via_BC[k=1]").slack);
    EXPECT_EQ(record(direct, "tripartite.cross[mu=1,r=1,s=0]").slack,
              record(swapped, "tripartite.cross[mu=1,r=0,s=1]").slack);
  }
}

TEST(Tripartite, RejectsInconsistentDims) {
  EXPECT_THROW(check_tripartite(uniform(4), uniform(4), uniform(2), uniform(8), {2, 2}), ArgumentError);
  EXPECT_THROW(check_tripartite(uniform(4), uniform(6), uniform(2), uniform(8), {2, 2, 2}), ArgumentError);
}

TEST(RankBracket, Conventions) {
  EXPECT_EQ(rank_bracket(2, 1, BracketConvention::kStrictlyLess), 1);
  EXPECT_EQ(rank_bracket(2, 1, BracketConvention::kFloor), 2);
  EXPECT_EQ(rank_bracket(3, 2, BracketConvention::kStrictlyLess), 1);
  EXPECT_EQ(rank_bracket(-1, 2, BracketConvention::kStrictlyLess), -1);
  EXPECT_EQ(rank_bracket(-1, 2, BracketConvention::kFloor), -1);
  EXPECT_EQ(rank_bracket(-2, 2, BracketConvention::kStrictlyLess), -2);
  EXPECT_EQ(rank_bracket(0, 3, BracketConvention::kStrictlyLess), -1);
  EXPECT_THROW(rank_bracket(1, 0, BracketConvention::kFloor), ArgumentError);
}

TEST(RankTheorem, FullRanksSatisfied) {
  const auto r = check_rank_theorem({8, 4, 4, 2}, {2, 2, 2});
  EXPECT_EQ(r.status, RankStatus::kSatisfied);
  EXPECT_EQ(r.orientations[0].bound, 0);
  EXPECT_EQ(r.orientations[0].t, 0);
  EXPECT_EQ(r.orientations[1].status, RankStatus::kSatisfied);
}

TEST(RankTheorem, GhzNotApplicable) {
  const auto r = check_rank_theorem({1, 2, 2, 2}, {2, 2, 2});
  EXPECT_EQ(r.status, RankStatus::kNotApplicable);
  EXPECT_EQ(r.orientations[0].status, RankStatus::kNotApplicable);
  EXPECT_EQ(r.orientations[1].status, RankStatus::kNotApplicable);
}

TEST(RankTheorem, DetectsViolationOnUnphysicalRanks) {
  // r = 0, s = 1, t = 1 on (2,2,2): premise holds, bound [(−1)/2] + 1 = 0.
  const auto r = check_rank_theorem({6, 4, 3, 1}, {2, 2, 2});
  EXPECT_EQ(r.orientations[0].status, RankStatus::kViolated);
  EXPECT_EQ(r.status, RankStatus::kViolated);
}

TEST(RankTheorem, NrExceedsLsIsNotApplicable) {
  // r = 2, s = 0 on (2,2,2): rank(ABC) = 8 matches, but Nr = 4 > Ls = 0.
  const auto r = check_rank_theorem({8, 2, 4, 2}, {2, 2, 2});
  EXPECT_EQ(r.orientations[0].status, RankStatus::kNotApplicable);
}

TEST(RankTheorem, FloorConventionIsLooserAtIntegers) {
  // (2,3,2) with r = s = 3 and t = 2: strict bound [1] + 1 = 1, floor bound 2.
  const TripartiteRanks ranks{12 - 2 * 3, 6 - 3, 6 - 3, 3 - 2};
  const auto strict = check_rank_theorem(ranks, {2, 3, 2}, BracketConvention::kStrictlyLess);
  const auto floor = check_rank_theorem(ranks, {2, 3, 2}, BracketConvention::kFloor);
  EXPECT_EQ(strict.orientations[0].bound, 1);
  EXPECT_EQ(floor.orientations[0].bound, 2);
  EXPECT_EQ(strict.orientations[0].status, RankStatus::kViolated);
  EXPECT_EQ(floor.orientations[0].status, RankStatus::kSatisfied);
}

TEST(RankTheorem, RejectsOutOfRangeRanks) {
  EXPECT_THROW(check_rank_theorem({0, 4, 4, 2}, {2, 2, 2}), ArgumentError);
  EXPECT_THROW(check_rank_theorem({8, 5, 4, 2}, {2, 2, 2}), ArgumentError);
}

TEST(PureMulti, TwoPartiesCollapseToEqualSpectra) {
  const Spectrum a({0.2, 0.3, 0.5});
  const auto same = check_pure_multipartite(std::vector<Spectrum>{a, a});
  EXPECT_TRUE(same.compatible());
  for (const auto& rec : same.records) EXPECT_EQ(rec.verdict, Verdict::kEqualityWithinTol);
  const auto differ = check_pure_multipartite(std::vector<Spectrum>{a, Spectrum({0.1, 0.4, 0.5})});
  EXPECT_FALSE(differ.compatible());
}

TEST(PureMulti, WStateSatisfied) {
  const Spectrum w({1.0 / 3, 2.0 / 3});
  const auto r = check_pure_multipartite(std::vector<Spectrum>{w, w, w});
  EXPECT_TRUE(r.compatible());
  const auto& rec = record(r, "pure.chain[k=0,l=2,p=1]");
  EXPECT_NEAR(rec.lhs, 2.0 / 3, 1e-15);
  EXPECT_NEAR(rec.rhs, 1.0 / 3, 1e-15);
  EXPECT_EQ(r.records.size(), 6u);
}

TEST(PureMulti, PurePartnersForceAPureParty) {
  const Spectrum pure({0.0, 1.0});
  const auto r = check_pure_multipartite(std::vector<Spectrum>{pure, pure, Spectrum({0.4, 0.6})});
  EXPECT_FALSE(r.compatible());
  EXPECT_EQ(record(r, "pure.chain[k=0,l=2,p=1]").verdict, Verdict::kViolated);
  EXPECT_EQ(r.sufficiency, SufficiencyClaim::kNecessaryOnly);
}

TEST(PureMulti, RejectsRaggedOrTooFew) {
  EXPECT_THROW(check_pure_multipartite(std::vector<Spectrum>{uniform(2)}), ArgumentError);
  EXPECT_THROW(check_pure_multipartite(std::vector<Spectrum>{uniform(2), uniform(3)}), ArgumentError);
}

TEST(Qutrit, Examples) {
  const auto mixed = check_three_qutrit_polytope(uniform(3), uniform(3), uniform(3));
  EXPECT_TRUE(mixed.compatible());
  EXPECT_EQ(mixed.sufficiency, SufficiencyClaim::kClaimedSufficient);
  const auto& first = record(mixed, "qutrit.ineq1[ABC]");
  EXPECT_NEAR(first.rhs, 2.0 / 3, 1e-15);
  EXPECT_NEAR(first.lhs, 4.0 / 3, 1e-15);
  const Spectrum pure({0.0, 0.0, 1.0});
  const auto product = check_three_qutrit_polytope(pure, pure, pure);
  EXPECT_TRUE(product.compatible());
  for (const auto& rec : product.records) EXPECT_NE(rec.verdict, Verdict::kViolated);
}

TEST(Qutrit, PermutedFamilyIsDeduplicated) {
  const auto r = check_three_qutrit_polytope(uniform(3), uniform(3), uniform(3));
  std::set<std::string> names;
  for (const auto& rec : r.records) names.insert(rec.name);
  EXPECT_EQ(names.size(), r.records.size());
  // 7 base rows; rows symmetric in their two right-hand parties contribute 3
  // relabelings, the others 6.
  EXPECT_EQ(r.records.size(), 36u);
  EXPECT_EQ(three_qutrit_lipschitz(), 9.0);
}

TEST(Qutrit, FirstRowByHand) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_simplex_point(3, rng), b = random_simplex_point(3, rng), c = random_simplex_point(3, rng);
    const auto r = check_three_qutrit_polytope(Spectrum(a), Spectrum(b), Spectrum(c));
    // λ₁ + λ₂ of B must not exceed that of A plus that of C.
    const double slack = testing::smallest_sum(a, 2) + testing::smallest_sum(c, 2) - testing::smallest_sum(b, 2);
    EXPECT_NEAR(record(r, "qutrit.ineq1[BAC]").slack, slack, 1e-14);
  }
}

// Any triple inside the qutrit polytope also satisfies the chain inequalities.
TEST(Qutrit, PolytopeImpliesChainInequalities) {
  Rng rng(6);
  std::size_t inside = 0;
  for (int t = 0; t < 20000; ++t) {
    std::vector<Spectrum> s;
    for (int j = 0; j < 3; ++j) s.emplace_back(random_simplex_point(3, rng));
    if (!check_three_qutrit_polytope(s[0], s[1], s[2]).compatible()) continue;
    ++inside;
    EXPECT_TRUE(check_pure_multipartite(s).compatible());
  }
  EXPECT_GT(inside, 1000u);
}

TEST(Qutrit, RejectsWrongLengths) {
  EXPECT_THROW(check_three_qutrit_polytope(uniform(2), uniform(3), uniform(3)), ArgumentError);
}

}  // namespace
}  // namespace qmarg
