#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rootarr/errors.hpp"
#include "rootarr/numeric.hpp"

namespace rootarr {

// Dense univariate polynomial. Coefficients are stored in ascending order
// (coeffs_[i] multiplies x^i) and trailing zeros are always trimmed, so the
// leading coefficient of a nonzero polynomial is nonzero. The zero
// polynomial has degree -1; it only shows up as an intermediate result of
// arithmetic (remainders, differences).
template <typename T>
class BasicPolynomial {
 public:
  using value_type = T;

  BasicPolynomial() = default;

  explicit BasicPolynomial(std::vector<T> ascending) : coeffs_(std::move(ascending)) {
    trim();
  }

  static BasicPolynomial constant(const T& c) { return BasicPolynomial(std::vector<T>{c}); }

  // x - r
  static BasicPolynomial linear_root(const T& r) {
    return BasicPolynomial(std::vector<T>{T(-r), T(1)});
  }

  static BasicPolynomial from_descending(const std::vector<T>& descending) {
    return BasicPolynomial(std::vector<T>(descending.rbegin(), descending.rend()));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  // Coefficient of x^i; zero outside the stored range.
  T coeff(int i) const {
    if (i < 0 || i > degree()) return T(0);
    return coeffs_[static_cast<std::size_t>(i)];
  }

  const T& leading() const { return coeffs_.back(); }
  const std::vector<T>& ascending() const { return coeffs_; }
  std::vector<T> descending() const { return {coeffs_.rbegin(), coeffs_.rend()}; }

  template <typename U>
  U operator()(const U& x) const {
    U acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + U(*it);
    return acc;
  }

  BasicPolynomial derivative() const {
    if (degree() <= 0) return {};
    std::vector<T> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * T(static_cast<long>(i));
    return BasicPolynomial(std::move(d));
  }

  BasicPolynomial monic() const {
    if (is_zero()) return {};
    std::vector<T> c = coeffs_;
    const T lc = leading();
    for (auto& v : c) v /= lc;
    return BasicPolynomial(std::move(c));
  }

  template <typename U>
  BasicPolynomial<U> cast() const {
    std::vector<U> c;
    c.reserve(coeffs_.size());
    for (const auto& v : coeffs_) c.push_back(convert<U>(v));
    return BasicPolynomial<U>(std::move(c));
  }

  friend BasicPolynomial operator+(const BasicPolynomial& a, const BasicPolynomial& b) {
    std::vector<T> c(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return BasicPolynomial(std::move(c));
  }

  friend BasicPolynomial operator-(const BasicPolynomial& a) {
    std::vector<T> c = a.coeffs_;
    for (auto& v : c) v = -v;
    return BasicPolynomial(std::move(c));
  }

  friend BasicPolynomial operator-(const BasicPolynomial& a, const BasicPolynomial& b) { return a + (-b); }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return BasicPolynomial(std::move(c));
  }

  friend BasicPolynomial operator*(const T& k, const BasicPolynomial& a) {
    std::vector<T> c = a.coeffs_;
    for (auto& v : c) v *= k;
    return BasicPolynomial(std::move(c));
  }

  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  template <typename U, typename V>
  static U convert(const V& v) {
    if constexpr (std::is_same_v<U, V>) {
      return v;
    } else if constexpr (std::is_same_v<U, double>) {
      return to_double(v);
    } else if constexpr (std::is_same_v<U, HpReal> && std::is_same_v<V, Rational>) {
      return HpReal(boost::multiprecision::numerator(v)) / HpReal(boost::multiprecision::denominator(v));
    } else if constexpr (std::is_same_v<U, Rational>) {
      // Binary floats are dyadic rationals, so this conversion is exact.
      return Rational(v);
    } else {
      return U(v);
    }
  }

  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using ExactPolynomial = BasicPolynomial<Rational>;
using FloatPolynomial = BasicPolynomial<double>;
using HpPolynomial = BasicPolynomial<HpReal>;

// s-th derivative. Throws InvalidOrder when s is negative or exceeds the degree.
template <typename T>
BasicPolynomial<T> derivative(const BasicPolynomial<T>& p, int s) {
  if (s < 0 || s > p.degree())
    throw InvalidOrder("derivative order " + std::to_string(s) + " outside [0, " +
                       std::to_string(p.degree()) + "]");
  BasicPolynomial<T> d = p;
  for (int i = 0; i < s; ++i) d = d.derivative();
  return d;
}

template <typename T>
BasicPolynomial<T> power(const BasicPolynomial<T>& p, int e) {
  BasicPolynomial<T> r = BasicPolynomial<T>::constant(T(1));
  for (int i = 0; i < e; ++i) r = r * p;
  return r;
}

// Euclidean division: a = q*b + r with deg r < deg b.
template <typename T>
std::pair<BasicPolynomial<T>, BasicPolynomial<T>> divmod(const BasicPolynomial<T>& a,
                                                          const BasicPolynomial<T>& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<T> rem = a.ascending();
  const int db = b.degree();
  if (a.degree() < db) return {BasicPolynomial<T>{}, a};
  std::vector<T> quot(static_cast<std::size_t>(a.degree() - db + 1), T(0));
  const T lb = b.leading();
  for (int k = a.degree() - db; k >= 0; --k) {
    const T f = rem[static_cast<std::size_t>(k + db)] / lb;
    quot[static_cast<std::size_t>(k)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.coeff(j);
    rem[static_cast<std::size_t>(k + db)] = T(0);
  }
  rem.resize(static_cast<std::size_t>(db));
  return {BasicPolynomial<T>(std::move(quot)), BasicPolynomial<T>(std::move(rem))};
}

// Monic greatest common divisor (exact arithmetic only).
ExactPolynomial gcd(const ExactPolynomial& a, const ExactPolynomial& b);

namespace detail {

// Integer polynomials as coefficient vectors, lowest degree first, with no
// trailing zeros.

// A positive integer multiple of p.
std::vector<Integer> integer_multiple(const ExactPolynomial& p);
// Divides out the positive content.
void make_primitive(std::vector<Integer>& a);
// A positive multiple of a mod b, made primitive.
std::vector<Integer> positive_remainder(std::vector<Integer> a, const std::vector<Integer>& b);

}  // namespace detail

// p(alpha*x + beta)
template <typename T>
BasicPolynomial<T> compose_affine(const BasicPolynomial<T>& p, const T& alpha, const T& beta) {
  const BasicPolynomial<T> lin(std::vector<T>{beta, alpha});
  BasicPolynomial<T> acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * lin + BasicPolynomial<T>::constant(p.coeff(i));
  return acc;
}

// Translation normal form: returns (q, shift) with q(x) = p(x + shift) and
// the x^(n-1) coefficient of q equal to zero.
template <typename T>
std::pair<BasicPolynomial<T>, T> depress(const BasicPolynomial<T>& p) {
  const int n = p.degree();
  if (n < 1) return {p, T(0)};
  const T shift = -p.coeff(n - 1) / (T(n) * p.leading());
  return {compose_affine(p, T(1), shift), shift};
}

enum class CoefficientKind { Exact, Float, HighPrecision };

// Polynomial with a runtime coefficient kind. The public operations that the
// CLI and catalog layer call take this type and dispatch on the kind.
class Polynomial {
 public:
  Polynomial(ExactPolynomial p) : rep_(std::move(p)) {}
  Polynomial(FloatPolynomial p) : rep_(std::move(p)) {}
  Polynomial(HpPolynomial p) : rep_(std::move(p)) {}

  CoefficientKind kind() const { return static_cast<CoefficientKind>(rep_.index()); }
  bool is_exact() const { return kind() == CoefficientKind::Exact; }
  int degree() const {
    return std::visit([](const auto& p) { return p.degree(); }, rep_);
  }

  const ExactPolynomial& exact() const;
  FloatPolynomial to_float() const;
  HpPolynomial to_hp() const;

  // Coefficients leading to trailing, as doubles.
  std::vector<double> descending_doubles() const;

  template <typename F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), rep_);
  }

 private:
  std::variant<ExactPolynomial, FloatPolynomial, HpPolynomial> rep_;
};

Polynomial derivative(const Polynomial& p, int s);

// Parses standard infix notation in the variable x, e.g. "x^6 - x^2",
// "(x-1)^2*(x^2+1)", "0.5x^3 - 3/4". Decimal and fractional literals are
// read exactly. Throws ParseError with the byte offset of the problem.
ExactPolynomial parse_polynomial(std::string_view text);

// Human-readable infix form, leading term first.
std::string format_polynomial(const ExactPolynomial& p);
std::string format_polynomial(const FloatPolynomial& p);

}  // namespace rootarr
