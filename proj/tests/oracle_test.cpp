#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "rootarr/admissibility.hpp"
#include "rootarr/realizer.hpp"

namespace rootarr {
namespace {

using testing::canonical_set;
using testing::derivative_chain_consistent;
using testing::keys;

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<std::string> chain_consistent_subset(const std::vector<Arrangement>& arrs) {
  std::set<std::string> out;
  for (const auto& a : arrs)
    if (derivative_chain_consistent(a)) out.insert(format_arrangement(a));
  return out;
}

// The oracle is a necessary condition, so it must accept every arrangement
// that actually occurs.
TEST(ChainOracle, AcceptsEverySampledPolynomial) {
  std::set<std::string> accepted;
  for (int n = 2; n <= 6; ++n) {
    std::uint64_t state = 977 + n;
    for (long i = 0; i < 1500; ++i) {
      const ExactPolynomial p = sample_polynomial(n, state);
      for (int s = 1; s < n; ++s) {
        const Arrangement a = extract(p, s).arrangement;
        const std::string key = std::to_string(s) + "|" + std::to_string(a.m()) + "|" + format_arrangement(a);
        if (accepted.count(key)) continue;
        ASSERT_TRUE(derivative_chain_consistent(a)) << format_polynomial(p) << " s=" << s << ": "
                                                    << format_arrangement(a);
        accepted.insert(key);
      }
    }
  }
}

TEST(ChainOracle, SimpleRejections) {
  // Cubic with one real root r and critical points a < r < b: P rises to
  // a, falls to b and rises again, so P(a) > 0 > P(b) and P has a second
  // root left of a.
  EXPECT_FALSE(derivative_chain_consistent(parse_arrangement("Q < P < Q", {.n = 3, .s = 1})));
  EXPECT_TRUE(derivative_chain_consistent(parse_arrangement("Q < Q < P", {.n = 3, .s = 1})));
  // A Rolle root outside the hull is caught as well.
  EXPECT_FALSE(derivative_chain_consistent(parse_arrangement("Q < P < P", {.n = 2, .s = 1})));
  // Multiplicity drop by exactly one along the chain.
  EXPECT_TRUE(derivative_chain_consistent(parse_arrangement("P < P^2Q^3 < P", {.n = 6, .s = 3})));
  EXPECT_TRUE(derivative_chain_consistent(parse_arrangement("P^4Q^3", {.n = 6, .s = 1})));
  EXPECT_FALSE(derivative_chain_consistent(parse_arrangement("P^2Q^2 < Q < P < P", {.n = 6, .s = 1})));
}

TEST(ChainOracle, QuarticSecondDerivativeRejections) {
  // P has two real roots a <= b and P < 0 between them. In "Q < P < P < Q"
  // P'' < 0 on [a, b], so P is concave there while vanishing at both ends,
  // which forces P >= 0 in between. The other four fail the same sign count.
  const std::set<std::string> rejected{"PQ < P < Q", "PQ < PQ", "Q < P < P < Q", "Q < P < PQ", "Q < P^2 < Q"};
  std::set<std::string> got;
  for (const auto& a : enumerate_admissible(4, 2, 1))
    if (!derivative_chain_consistent(a)) got.insert(format_arrangement(a));
  EXPECT_EQ(got, rejected);
}

TEST(SamplingOracle, HyperbolicCubicsEqualEnumeration) {
  const auto seen = keys(testing::sample_hyperbolic_cubics(50000, 3));
  EXPECT_EQ(seen, canonical_set(enumerate_admissible(3, 1, 0)));
}

TEST(SamplingOracle, CubicsWithOneRealRoot) {
  const auto seen = keys(testing::sample_depressed_cubics_one_real(50000, 9));
  const auto enumerated = enumerate_admissible(3, 1, 1);
  EXPECT_TRUE(subset(seen, canonical_set(enumerated)));
  // Every configuration the chain condition allows is observed.
  EXPECT_EQ(seen, chain_consistent_subset(enumerated));
  EXPECT_FALSE(seen.count("Q < P < Q"));
}

TEST(SamplingOracle, QuarticsWithOnePairAgainstSecondDerivative) {
  const auto seen = keys(testing::sample_depressed_quartics_one_pair(100000, 21));
  const auto enumerated = enumerate_admissible(4, 2, 1);
  const auto consistent = chain_consistent_subset(enumerated);
  EXPECT_TRUE(subset(seen, canonical_set(enumerated)));
  EXPECT_TRUE(subset(seen, consistent));
  // Sampling gives a lower bound on the realizable set.
  EXPECT_GE(seen.size(), 10u);
  RecordProperty("observed", static_cast<int>(seen.size()));
  RecordProperty("chain_consistent", static_cast<int>(consistent.size()));
  RecordProperty("enumerated", static_cast<int>(enumerated.size()));
}

TEST(SamplingOracle, SoundnessObservedSetsInsideEnumeration) {
  for (int n = 2; n <= 5; ++n)
    for (int s = 1; s < n; ++s) {
      const auto rep = soundness_sweep(n, s, 3000, 41);
      std::set<std::string> all;
      for (int m = 0; 2 * m + s <= n; ++m)
        for (const auto& k : canonical_set(enumerate_admissible(n, s, m))) all.insert(k);
      for (const auto& [k, count] : rep.observed) EXPECT_TRUE(all.count(k)) << k << " n=" << n << " s=" << s;
    }
}

}  // namespace
}  // namespace rootarr
