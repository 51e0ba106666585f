#pragma once

#include <complex>
#include <vector>

#include "rootarr/numeric.hpp"
#include "rootarr/polynomial.hpp"

namespace rootarr {

struct RealRoot {
  double location = 0.0;
  int multiplicity = 1;

  friend bool operator==(const RealRoot&, const RealRoot&) = default;
};

// Real roots with multiplicities plus the number of complex-conjugate pairs
// (counted with multiplicity). Locations are strictly increasing and
// sum(multiplicity) + 2*complex_pairs == degree.
struct RootProfile {
  std::vector<RealRoot> real_roots;
  int complex_pairs = 0;
  // Set on the floating paths when two computed roots were merged because
  // they were closer than the cluster threshold.
  bool cluster_ambiguity = false;

  int real_count() const {
    int k = 0;
    for (const auto& r : real_roots) k += r.multiplicity;
    return k;
  }
  int degree() const { return real_count() + 2 * complex_pairs; }
};

struct SquareFreeFactor {
  ExactPolynomial factor;  // monic, square-free
  int exponent = 1;
};

// Yun's algorithm. p = lc(p) * prod factor_i^exponent_i with the factors
// monic, square-free and pairwise coprime; constant factors are dropped.
std::vector<SquareFreeFactor> square_free_decompose(const ExactPolynomial& p);

// Throws ExactArithmeticRequired unless p has exact coefficients.
std::vector<SquareFreeFactor> square_free_decompose(const Polynomial& p);

struct IsolationOptions {
  double refine_to = 1e-12;
  double cluster_eps = 1e-7;
};

// Exact path: Sturm-sequence isolation on the square-free parts, bisection
// to 1e-6 followed by safeguarded Newton refinement. Multiplicities are exact.
RootProfile isolate_roots(const ExactPolynomial& p, double refine_to = 1e-12);

// Floating paths: companion-matrix eigenvalues (double) or Aberth iteration
// (high precision), followed by single-linkage clustering at cluster_eps.
RootProfile isolate_roots(const FloatPolynomial& p, const IsolationOptions& opts = {});
RootProfile isolate_roots(const HpPolynomial& p, const IsolationOptions& opts = {});

RootProfile isolate_roots(const Polynomial& p, const IsolationOptions& opts = {});

// All complex roots. Conjugate symmetry is enforced by averaging matched
// pairs, so every root with nonzero imaginary part has an exact mirror;
// roots without a close enough mirror are put on the real axis.
std::vector<std::complex<double>> roots_complex(const FloatPolynomial& p);
std::vector<Complex<HpReal>> roots_complex(const HpPolynomial& p);
std::vector<std::complex<double>> roots_complex(const Polynomial& p);

namespace detail {

// A positive integer multiple of an exact polynomial, lowest degree first,
// kept for exact sign evaluation. small mirrors coeffs when all fit in 64
// bits.
struct ClearedPolynomial {
  std::vector<Integer> coeffs;
  std::vector<long long> small;
  std::vector<double> magnitude;
};

}  // namespace detail

// Sturm sequence of a square-free exact polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const ExactPolynomial& squarefree);

  // Number of distinct real roots in the half-open interval (a, b].
  int count(const Rational& a, const Rational& b) const;
  int variations(const Rational& x) const;

  const std::vector<ExactPolynomial>& chain() const { return chain_; }

 private:
  std::vector<ExactPolynomial> chain_;
  // Each chain member times a positive integer, so signs can be taken
  // without rational arithmetic.
  std::vector<detail::ClearedPolynomial> cleared_;
};

// Isolating interval of one real root of a square-free polynomial. Either
// lo == hi (the root is exactly the rational lo), or the root is the only
// one in the open interval (lo, hi) and the polynomial is nonzero at both
// endpoints.
struct RootInterval {
  Rational lo;
  Rational hi;

  bool is_exact() const { return lo == hi; }
};

std::vector<RootInterval> isolate_intervals(const ExactPolynomial& squarefree);

// Joint isolation of the real roots of several exact polynomials. The roots
// of all of them are merged into one increasing list; multiplicity[k][i] is
// the multiplicity of roots[i] as a root of polys[k] (0 when not a root).
// Coincidences are decided exactly.
struct JointRoots {
  std::vector<RootInterval> intervals;
  std::vector<double> locations;
  std::vector<std::vector<int>> multiplicity;
};

JointRoots isolate_joint(const std::vector<ExactPolynomial>& polys, double refine_to);

// Root location refinement for an isolating interval of a square-free
// polynomial. Returns a double within refine_to of the root.
double refine_root(const ExactPolynomial& squarefree, const RootInterval& iv, double refine_to);

// Groups complex roots whose mutual distance is below eps (single linkage)
// and turns the groups into a RootProfile. Self-conjugate groups become real
// roots with multiplicity equal to the group size.
template <typename T>
RootProfile cluster_roots(const std::vector<Complex<T>>& roots, double eps);

}  // namespace rootarr
