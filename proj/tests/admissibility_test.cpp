#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "rootarr/admissibility.hpp"
#include "rootarr/errors.hpp"
#include "rootarr/realizer.hpp"

namespace rootarr {
namespace {

using testing::canonical_set;

bool has(const std::vector<Violation>& v, Condition c) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.condition == c; });
}

TEST(RolleChain, Example2HasNoViolations) {
  const Arrangement a = parse_arrangement("P < Q < P^2Q < Q < P", {.n = 6, .s = 1});
  EXPECT_TRUE(check_rolle_chain(a, RolleAssignment{{0, 1, 1, 1, 0}}).empty());
}

TEST(RolleChain, DerivativeRootLeftOfHull) {
  const Arrangement a = parse_arrangement("Q < P < P", {.n = 2, .s = 1});
  const auto v = check_rolle_chain(a, RolleAssignment{{1, 0, 0}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, Condition::RolleChain1);
  EXPECT_EQ(v[0].indices, std::vector<int>{1});
}

TEST(Multiplicity, CoincidenceBoundAttainedForSextic) {
  // x^6 - x^2 against its third derivative: a double root of P carrying a
  // triple root of P''' with m = 1, so g = 2m + 1 exactly.
  const Arrangement a = parse_arrangement("P < P^2Q^3 < P", {.n = 6, .s = 3});
  EXPECT_TRUE(check_multiplicity_conditions(a, RolleAssignment{{0, 1, 0}}).empty());
  const auto rep = is_admissible(a);
  EXPECT_TRUE(rep.verdict);
  ASSERT_TRUE(rep.rolle_witness.has_value());
  EXPECT_EQ(rep.rolle_witness->rolle_count, (std::vector<int>{0, 1, 0}));
}

TEST(Multiplicity, HighRootMustCarryExactlyDMinusS) {
  // d = 4 > s = 2 needs g = 2.
  const Arrangement a = parse_arrangement("P^4Q < Q", {.n = 4, .s = 2});
  const auto v = check_multiplicity_conditions(a, RolleAssignment{{1, 1}});
  EXPECT_TRUE(has(v, Condition::Prop1Part1));
  EXPECT_TRUE(has(v, Condition::CondA));
  EXPECT_FALSE(is_admissible(a).verdict);
}

TEST(Multiplicity, RootOfMultiplicitySCannotMeetDerivative) {
  const Arrangement a = parse_arrangement("P^2Q < P < P < Q", {.n = 4, .s = 2});
  EXPECT_TRUE(has(check_multiplicity_conditions(a, RolleAssignment{{1, 0, 0, 1}}), Condition::Prop1Part2));
  EXPECT_FALSE(is_admissible(a).verdict);
}

TEST(Multiplicity, CoincidenceAboveTwoMPlusOneRejected) {
  // m = 0: a simple root of P may share at most a simple root of P'.
  const Arrangement a = parse_arrangement("P < PQ^2 < P < P", {.n = 4, .s = 2});
  EXPECT_TRUE(has(check_multiplicity_conditions(a, RolleAssignment{{0, 2, 0, 0}}), Condition::Prop1Part2));
  EXPECT_FALSE(is_admissible(a).verdict);
}

TEST(ConditionC, TouchingWithoutFullCollapse) {
  // xi_1 = x_1 while x_2 lies further right.
  const Arrangement a = parse_arrangement("PQ < Q < P < P", {.n = 3, .s = 1});
  const auto v = check_condition_c(a, RolleAssignment{{1, 1, 0, 0}});
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].condition, Condition::CondC);
}

TEST(ConditionC, DoubleRootExample) {
  const Arrangement a = parse_arrangement("P^2Q", {.n = 2, .s = 1});
  EXPECT_TRUE(check_condition_c(a, RolleAssignment{{1}}).empty());
}

TEST(ConditionC, NotApplicableForComplexRootsUnlessForced) {
  const Arrangement a = parse_arrangement("P < Q^2", {.n = 3, .s = 1, .m = 1});
  EXPECT_THROW(check_condition_c(a, RolleAssignment{{0, 0}}), NotApplicable);
  EXPECT_NO_THROW(check_condition_c(a, RolleAssignment{{0, 0}}, true));
}

TEST(ConditionC, ModeChangesVerdictOnlyWhenMIsPositive) {
  // Hyperbolic enumerations never depend on the mode.
  for (int n = 2; n <= 5; ++n)
    for (int s = 1; s < n; ++s)
      EXPECT_EQ(canonical_set(enumerate_admissible(n, s, 0)),
                canonical_set(enumerate_admissible(n, s, 0, {CondCMode::Always})));
  // Forcing C with m > 0 can only remove arrangements.
  const auto lit = canonical_set(enumerate_admissible(5, 1, 1));
  const auto strict = canonical_set(enumerate_admissible(5, 1, 1, {CondCMode::Always}));
  EXPECT_TRUE(std::includes(lit.begin(), lit.end(), strict.begin(), strict.end()));
}

TEST(IsAdmissible, Example2) {
  const Arrangement a = parse_arrangement("P < Q < P^2Q < Q < P", {.n = 6, .s = 1, .m = 1, .m_prime = 1});
  EXPECT_TRUE(is_admissible(a).verdict);
}

TEST(IsAdmissible, ReportsFewestViolations) {
  const Arrangement a = parse_arrangement("Q < P < P", {.n = 2, .s = 1});
  const auto rep = is_admissible(a);
  EXPECT_FALSE(rep.verdict);
  EXPECT_FALSE(rep.rolle_witness.has_value());
  EXPECT_FALSE(rep.violations.empty());
  const auto j = to_json(rep);
  EXPECT_FALSE(j["admissible"].get<bool>());
  EXPECT_FALSE(j["violations"].empty());
}

TEST(Enumerate, QuadraticHasTwoArrangements) {
  const std::set<std::string> want{"P < Q < P", "P^2Q"};
  EXPECT_EQ(canonical_set(enumerate_admissible(2, 1, 0)), want);
}

TEST(Enumerate, HyperbolicCubicsMatchSampling) {
  // Integer-root cubics hit every configuration, the triple root included.
  const auto seen = testing::keys(testing::sample_hyperbolic_cubics(20000, 11));
  EXPECT_EQ(canonical_set(enumerate_admissible(3, 1, 0)), seen);
}

TEST(Enumerate, CubicsWithOneRealRoot) {
  // P' has degree 2: either two real roots or none. The sampled depressed
  // family sees the generic configurations.
  const auto got = canonical_set(enumerate_admissible(3, 1, 1));
  for (const char* must : {"P", "Q^2 < P", "P < Q^2", "Q < Q < P", "P < Q < Q"})
    EXPECT_TRUE(got.count(must)) << must;
  for (const auto& a : enumerate_admissible(3, 1, 1)) EXPECT_TRUE(is_admissible(a).verdict);
  const auto seen = testing::keys(testing::sample_depressed_cubics_one_real(20000, 5));
  EXPECT_TRUE(std::includes(got.begin(), got.end(), seen.begin(), seen.end()));
}

TEST(Enumerate, CanonicalAndDeterministic) {
  const auto a = enumerate_admissible(5, 2, 1);
  const auto b = enumerate_admissible(5, 2, 1);
  EXPECT_EQ(a, b);
  std::set<std::string> keys;
  for (const auto& x : a) {
    const std::string k = format_arrangement(x);
    EXPECT_TRUE(keys.insert(k).second) << "duplicate " << k;
    EXPECT_EQ(format_arrangement(parse_arrangement(k, {.n = x.n(), .s = x.s()})), k);
  }
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](const auto& x, const auto& y) {
    return format_arrangement(x) < format_arrangement(y);
  }));
}

TEST(Enumerate, ParameterValidation) {
  EXPECT_THROW(enumerate_admissible(3, 0, 0), InvalidParams);
  EXPECT_THROW(enumerate_admissible(3, 3, 0), InvalidParams);
  EXPECT_THROW(enumerate_admissible(4, 1, 3), InvalidParams);
  EXPECT_THROW(enumerate_admissible(4, 3, 1), InvalidParams);
}

TEST(Enumerate, ClosureMembersDecidedDirectly) {
  // Degenerations of the sextic chain. With s = 1 every merged position
  // holding a P root of multiplicity d must carry exactly d - 1 copies of
  // Q, so only merges that swallow P and Q in alternation survive: none,
  // the left three, the right three, or all five.
  const Arrangement beta = parse_arrangement("P < Q < P^2Q < Q < P", {.n = 6, .s = 1});
  std::set<std::string> admissible;
  for (const auto& a : closure_of(beta))
    if (is_admissible(a).verdict) admissible.insert(format_arrangement(a));
  const std::set<std::string> want{"P < Q < P^2Q < Q < P", "P^3Q^2 < Q < P", "P < Q < P^3Q^2", "P^4Q^3"};
  EXPECT_EQ(admissible, want);
}

TEST(Soundness, SampledPolynomialsAreAdmissible) {
  for (int n = 2; n <= 5; ++n)
    for (int s = 1; s < n; ++s) {
      const auto rep = soundness_sweep(n, s, 2000, 100 + n * 10 + s);
      EXPECT_EQ(rep.violations, 0) << "n=" << n << " s=" << s
                                   << (rep.examples.empty() ? "" : " e.g. " + rep.examples.front());
    }
}

}  // namespace
}  // namespace rootarr
