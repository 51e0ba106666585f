#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "rootarr/arrangement.hpp"
#include "rootarr/errors.hpp"

namespace rootarr {
namespace {

const char* kExample2 = "P < Q < P^2Q < Q < P";

TEST(ParseArrangement, Example2Chain) {
  const Arrangement a = parse_arrangement(kExample2, {.n = 6, .s = 1, .m = 1, .m_prime = 1});
  ASSERT_EQ(a.size(), 5);
  EXPECT_EQ(a.positions()[2], (Position{2, 1}));
  EXPECT_EQ(a.m(), 1);
  EXPECT_EQ(a.m_prime(), 1);
  EXPECT_EQ(a.rolle_total(), 3);
}

TEST(ParseArrangement, TwoPointExamples) {
  const Arrangement merged = parse_arrangement("P^2Q", {.n = 2, .s = 1, .m = 0, .m_prime = 0});
  ASSERT_EQ(merged.size(), 1);
  EXPECT_EQ(merged.positions()[0], (Position{2, 1}));
  const Arrangement split = parse_arrangement("P < Q < P", {.n = 2, .s = 1, .m = 0, .m_prime = 0});
  EXPECT_EQ(split.size(), 3);
}

TEST(ParseArrangement, AcceptsAlternateSpellings) {
  EXPECT_EQ(parse_arrangement("QP^{2}<P"), parse_arrangement("P^2Q < P"));
  EXPECT_EQ(parse_arrangement("  P<  Q<P "), parse_arrangement("P < Q < P"));
}

TEST(ParseArrangement, InfersDegreeAndOrder) {
  const Arrangement a = parse_arrangement("P < Q < P^2Q < Q < P", {.s = 1});
  EXPECT_EQ(a.n(), 4);  // m = 0 assumed
  const Arrangement b = parse_arrangement("P < P^2Q^3 < P", {.n = 6});
  EXPECT_EQ(b.s(), 3);
  EXPECT_EQ(b.m(), 1);
}

TEST(ParseArrangement, Errors) {
  EXPECT_THROW(parse_arrangement("P << Q"), ParseError);
  EXPECT_THROW(parse_arrangement("P < R"), ParseError);
  EXPECT_THROW(parse_arrangement("P < Q^0"), ParseError);
  // Totals inconsistent with the declared header.
  EXPECT_THROW(parse_arrangement("P < Q < P", {.n = 2, .s = 1, .m = 1}), InvalidArrangement);
  EXPECT_THROW(parse_arrangement("P < Q < Q < P", {.n = 3, .s = 1}), InvalidArrangement);
}

TEST(FormatArrangement, RoundTrips) {
  for (const char* text : {kExample2, "P^2Q", "P < P^2Q^3 < P"}) {
    const Arrangement a = parse_arrangement(text, {.n = 6});
    EXPECT_EQ(format_arrangement(parse_arrangement(format_arrangement(a), {.n = a.n(), .s = a.s()})), format_arrangement(a));
  }
  EXPECT_EQ(format_arrangement(parse_arrangement("QP^2 < P", {.n = 3})), "P^2Q < P");
}

TEST(ArrangementJson, RoundTrips) {
  const Arrangement a = parse_arrangement(kExample2, {.n = 6, .s = 1});
  EXPECT_EQ(arrangement_from_json(to_json(a)), a);
}

TEST(Extract, Example2FirstDerivative) {
  const Extraction e = extract(parse_polynomial("x^6 - x^2"), 1);
  EXPECT_EQ(format_arrangement(e.arrangement), kExample2);
  EXPECT_EQ(e.arrangement.m(), 1);
  EXPECT_EQ(e.arrangement.m_prime(), 1);
}

TEST(Extract, Example2ThirdDerivative) {
  const Extraction e = extract(parse_polynomial("x^6 - x^2"), 3);
  EXPECT_EQ(format_arrangement(e.arrangement), "P < P^2Q^3 < P");
  EXPECT_EQ(e.arrangement.m_prime(), 0);
}

TEST(Extract, FloatPathAgreesWithExactPath) {
  const ExactPolynomial p = testing::from_roots({Rational(-2), Rational(0), Rational(0), Rational(1), Rational(3)});
  for (int s = 1; s <= 4; ++s) {
    const Extraction ex = extract(p, s);
    const Extraction fl = extract(Polynomial(p.cast<double>()), s);
    EXPECT_EQ(fl.arrangement, ex.arrangement) << "s=" << s;
  }
}

TEST(RolleAssignments, Example2ThirdDerivativeSplit) {
  const Arrangement a = parse_arrangement("P < P^2Q^3 < P", {.n = 6, .s = 3});
  const auto assigns = rolle_assignments(a);
  ASSERT_EQ(assigns.size(), 1u);
  EXPECT_EQ(assigns[0].rolle_count, (std::vector<int>{0, 1, 0}));
}

TEST(RolleAssignments, Example2AllRolle) {
  const Arrangement a = parse_arrangement(kExample2, {.n = 6, .s = 1});
  const auto assigns = rolle_assignments(a);
  ASSERT_EQ(assigns.size(), 1u);
  EXPECT_EQ(assigns[0].rolle_count, (std::vector<int>{0, 1, 1, 1, 0}));
  EXPECT_TRUE(interlacing_failures(a, assigns[0]).empty());
}

TEST(RolleAssignments, RootOutsideHullFailsInterlacing) {
  const Arrangement a = parse_arrangement("Q < P < P", {.n = 2, .s = 1});
  EXPECT_TRUE(rolle_assignments(a).empty());
  const auto fails = interlacing_failures(a, RolleAssignment{{1, 0, 0}});
  EXPECT_EQ(fails, std::vector<int>{1});
}

TEST(CandidateAssignments, AllBoundedCompositions) {
  // n = 5, s = 1, m = 1: four Q copies of which n - 2m - s = 2 are Rolle.
  const Arrangement a = parse_arrangement("P < Q^2 < P < Q < P < Q", {.n = 5, .s = 1, .m = 1});
  const auto c = candidate_assignments(a);
  std::set<std::vector<int>> got;
  for (const auto& r : c) got.insert(r.rolle_count);
  const std::set<std::vector<int>> want{
      {0, 2, 0, 0, 0, 0}, {0, 1, 0, 1, 0, 0}, {0, 1, 0, 0, 0, 1}, {0, 0, 0, 1, 0, 1}};
  EXPECT_EQ(got, want);
}

// Every subset of the k inequality signs can be merged independently;
// distinct subsets give distinct chains because merging strictly shortens
// a different set of gaps.
std::set<std::string> closure_by_subsets(const Arrangement& beta) {
  std::set<std::string> out;
  const int k = beta.size() - 1;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<Position> merged{beta.positions()[0]};
    for (int i = 0; i < k; ++i) {
      const Position& next = beta.positions()[static_cast<std::size_t>(i + 1)];
      if (mask & (1 << i)) {
        merged.back().p_mult += next.p_mult;
        merged.back().q_mult += next.q_mult;
      } else {
        merged.push_back(next);
      }
    }
    out.insert(format_arrangement(Arrangement::make(beta.n(), beta.s(), merged)));
  }
  return out;
}

TEST(Closure, TwoPointExample) {
  const Arrangement beta = parse_arrangement("P < Q < P", {.n = 2, .s = 1});
  const auto cl = closure_of(beta);
  const std::set<std::string> want{"P < Q < P", "PQ < P", "P < PQ", "P^2Q"};
  EXPECT_EQ(testing::canonical_set(cl), want);
}

TEST(Closure, Example2HasSixteenMembers) {
  const Arrangement beta = parse_arrangement(kExample2, {.n = 6, .s = 1});
  const auto cl = closure_of(beta);
  EXPECT_EQ(cl.size(), 16u);
  EXPECT_EQ(testing::canonical_set(cl), closure_by_subsets(beta));
}

TEST(Closure, RelationsMapEveryPosition) {
  const Arrangement beta = parse_arrangement(kExample2, {.n = 6, .s = 1});
  for (const auto& rel : closure_relations(beta)) {
    ASSERT_EQ(rel.merge_map.size(), beta.positions().size());
    EXPECT_EQ(rel.merge_map.front(), 0);
    EXPECT_EQ(rel.merge_map.back(), rel.alpha.size() - 1);
    for (std::size_t i = 1; i < rel.merge_map.size(); ++i) {
      const int step = rel.merge_map[i] - rel.merge_map[i - 1];
      EXPECT_TRUE(step == 0 || step == 1);
    }
  }
}

}  // namespace
}  // namespace rootarr
