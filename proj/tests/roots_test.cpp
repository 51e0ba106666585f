#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rootarr/errors.hpp"
#include "rootarr/roots.hpp"

namespace rootarr {
namespace {

using testing::from_roots;

ExactPolynomial P(const char* text) { return parse_polynomial(text); }

TEST(SquareFree, YunFactorization) {
  const ExactPolynomial p = P("3(x-1)^3*(x+2)^2*(x^2+1)");
  const auto factors = square_free_decompose(p);
  ASSERT_EQ(factors.size(), 3u);
  ExactPolynomial rebuilt = ExactPolynomial::constant(p.leading());
  for (const auto& f : factors) rebuilt = rebuilt * power(f.factor, f.exponent);
  EXPECT_EQ(rebuilt, p);
  EXPECT_EQ(factors[0].factor, P("x^2+1"));
  EXPECT_EQ(factors[0].exponent, 1);
  EXPECT_EQ(factors[1].factor, P("x+2"));
  EXPECT_EQ(factors[1].exponent, 2);
  EXPECT_EQ(factors[2].factor, P("x-1"));
  EXPECT_EQ(factors[2].exponent, 3);
}

TEST(SquareFree, RejectsFloatCoefficients) {
  const Polynomial fl(P("x^2-1").cast<double>());
  EXPECT_THROW(square_free_decompose(fl), ExactArithmeticRequired);
}

TEST(Sturm, CountsDistinctRootsInHalfOpenInterval) {
  const SturmSequence st(P("(x-1)*(x-2)*(x-3)*(x^2+1)"));
  EXPECT_EQ(st.count(Rational(0), Rational(10)), 3);
  EXPECT_EQ(st.count(Rational(1), Rational(3)), 2);  // (1, 3]
  EXPECT_EQ(st.count(Rational(-5), Rational(1)), 1);
  EXPECT_EQ(st.count(Rational(3, 2), Rational(5, 2)), 1);
}

TEST(Isolation, IntervalsAreDisjointAndExactWhenRational) {
  const auto ivs = isolate_intervals(P("(x-1/2)*(x^2-2)"));
  ASSERT_EQ(ivs.size(), 3u);
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) EXPECT_LE(ivs[i].hi, ivs[i + 1].lo);
  const double sqrt2 = std::sqrt(2.0);
  EXPECT_LT(to_double(ivs[0].lo), -sqrt2);
  EXPECT_GT(to_double(ivs[0].hi), -sqrt2);
  EXPECT_LT(to_double(ivs[2].lo), sqrt2);
  EXPECT_GT(to_double(ivs[2].hi), sqrt2);
}

TEST(IsolateRoots, ExactMultiplicities) {
  const RootProfile prof = isolate_roots(P("(x-1)^3*(x+2)^2*(x^2+1)*(x^2+x+1)"));
  ASSERT_EQ(prof.real_roots.size(), 2u);
  EXPECT_NEAR(prof.real_roots[0].location, -2.0, 1e-12);
  EXPECT_EQ(prof.real_roots[0].multiplicity, 2);
  EXPECT_NEAR(prof.real_roots[1].location, 1.0, 1e-12);
  EXPECT_EQ(prof.real_roots[1].multiplicity, 3);
  EXPECT_EQ(prof.complex_pairs, 2);
  EXPECT_EQ(prof.degree(), 9);
  EXPECT_FALSE(prof.cluster_ambiguity);
}

TEST(IsolateRoots, IrrationalRootsRefined) {
  const RootProfile prof = isolate_roots(P("x^6 - x^2").derivative());
  // 6x^5 - 2x = 2x(3x^4 - 1)
  ASSERT_EQ(prof.real_roots.size(), 3u);
  const double r = std::pow(3.0, -0.25);
  EXPECT_NEAR(prof.real_roots[0].location, -r, 1e-12);
  EXPECT_NEAR(prof.real_roots[1].location, 0.0, 1e-12);
  EXPECT_NEAR(prof.real_roots[2].location, r, 1e-12);
  EXPECT_EQ(prof.complex_pairs, 1);
}

TEST(IsolateRoots, FloatPathClustersMultipleRoots) {
  const FloatPolynomial p = from_roots({Rational(1), Rational(1), Rational(-1)}).cast<double>();
  const RootProfile prof = isolate_roots(p);
  ASSERT_EQ(prof.real_roots.size(), 2u);
  EXPECT_EQ(prof.real_roots[1].multiplicity, 2);
  EXPECT_NEAR(prof.real_roots[1].location, 1.0, 1e-6);
}

TEST(IsolateRoots, HighPrecisionResolvesCloseRoots) {
  // Roots 1e-5 apart are far above the cluster threshold in 80 digits.
  const HpPolynomial p = from_roots({Rational(1), Rational(100001, 100000), Rational(3)}).cast<HpReal>();
  const RootProfile prof = isolate_roots(p);
  ASSERT_EQ(prof.real_roots.size(), 3u);
  EXPECT_EQ(prof.complex_pairs, 0);
}

TEST(RootsComplex, ConjugatePairsAreExactMirrors) {
  const auto z = roots_complex(P("(x^2+2x+5)*(x^2+1)*(x-3)").cast<double>());
  ASSERT_EQ(z.size(), 5u);
  int real = 0;
  for (const auto& r : z) {
    if (r.imag() == 0) {
      ++real;
      continue;
    }
    bool mirrored = false;
    for (const auto& o : z) mirrored = mirrored || o == std::conj(r);
    EXPECT_TRUE(mirrored) << r;
  }
  EXPECT_EQ(real, 1);
}

TEST(RootsComplex, CloseDistinctRealRootsStayReal) {
  // Regression: two distinct real roots whose computed imaginary parts had
  // opposite signs were averaged into a spurious conjugate pair.
  const std::vector<Rational> rts{Rational(-1), Rational(-999, 1000), Rational(1, 3), Rational(1, 3) + Rational(1, 10000),
                                  Rational(2)};
  const HpPolynomial p = from_roots(rts).cast<HpReal>();
  const auto z = roots_complex(p);
  for (const auto& r : z) EXPECT_EQ(r.imag(), HpReal(0));
  const RootProfile prof = isolate_roots(p);
  EXPECT_EQ(prof.complex_pairs, 0);
  EXPECT_EQ(prof.real_roots.size(), 5u);
}

TEST(ClusterRoots, SelfConjugateGroupBecomesRealRoot) {
  const std::vector<std::complex<double>> z{{1.0, 1e-9}, {1.0, -1e-9}, {1.0 + 1e-9, 0.0}, {0.0, 2.0}, {0.0, -2.0}};
  const RootProfile prof = cluster_roots(z, 1e-7);
  ASSERT_EQ(prof.real_roots.size(), 1u);
  EXPECT_EQ(prof.real_roots[0].multiplicity, 3);
  EXPECT_EQ(prof.complex_pairs, 1);
  EXPECT_TRUE(prof.cluster_ambiguity);
}

TEST(JointIsolation, SharedRootsDecidedExactly) {
  const ExactPolynomial p = P("x^6 - x^2");
  const JointRoots jr = isolate_joint({p, derivative(p, 1)}, 1e-12);
  // P: -1, 0 (double), 1; P': 0, +-3^{-1/4}
  ASSERT_EQ(jr.locations.size(), 5u);
  EXPECT_EQ(jr.multiplicity[0], (std::vector<int>{1, 0, 2, 0, 1}));
  EXPECT_EQ(jr.multiplicity[1], (std::vector<int>{0, 1, 1, 1, 0}));
}

}  // namespace
}  // namespace rootarr
