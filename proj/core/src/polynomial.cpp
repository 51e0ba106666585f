#include "rootarr/polynomial.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace rootarr {

namespace detail {

std::vector<Integer> integer_multiple(const ExactPolynomial& p) {
  Integer l(1);
  for (int i = 0; i <= p.degree(); ++i)
    mpz_lcm(l.backend().data(), l.backend().data(), mpq_denref(p.coeff(i).backend().data()));
  std::vector<Integer> c;
  for (int i = 0; i <= p.degree(); ++i) {
    Integer v;
    mpz_divexact(v.backend().data(), l.backend().data(), mpq_denref(p.coeff(i).backend().data()));
    mpz_mul(v.backend().data(), v.backend().data(), mpq_numref(p.coeff(i).backend().data()));
    c.push_back(std::move(v));
  }
  return c;
}

namespace {

void trim(std::vector<Integer>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

}  // namespace

void make_primitive(std::vector<Integer>& a) {
  Integer g(0);
  for (const auto& v : a) mpz_gcd(g.backend().data(), g.backend().data(), v.backend().data());
  if (g > 1)
    for (auto& v : a) mpz_divexact(v.backend().data(), v.backend().data(), g.backend().data());
}

std::vector<Integer> positive_remainder(std::vector<Integer> r, const std::vector<Integer>& b) {
  const std::size_t db = b.size() - 1;
  const Integer lb = abs(b.back());
  const int sb = b.back().sign();
  Integer f;
  while (r.size() > db) {
    const std::size_t shift = r.size() - 1 - db;
    f = r.back();
    if (sb < 0) f = -f;
    for (auto& v : r) v *= lb;
    for (std::size_t j = 0; j <= db; ++j) r[shift + j] -= f * b[j];
    r.pop_back();
    trim(r);
    make_primitive(r);
  }
  return r;
}

}  // namespace detail

ExactPolynomial gcd(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (b.is_zero()) return a.monic();
  if (a.is_zero()) return b.monic();
  // Primitive remainder sequence over the integers.
  std::vector<Integer> x = detail::integer_multiple(a), y = detail::integer_multiple(b);
  detail::make_primitive(x);
  detail::make_primitive(y);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    std::vector<Integer> r = detail::positive_remainder(std::move(x), y);
    x = std::move(y);
    y = std::move(r);
  }
  std::vector<Rational> c;
  for (const auto& v : x) c.emplace_back(v);
  return ExactPolynomial(std::move(c)).monic();
}

std::string format_decimal17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_rational(const Rational& x) { return x.str(); }

const ExactPolynomial& Polynomial::exact() const {
  if (const auto* p = std::get_if<ExactPolynomial>(&rep_)) return *p;
  throw ExactArithmeticRequired("operation requires exact-rational coefficients");
}

FloatPolynomial Polynomial::to_float() const {
  return visit([](const auto& p) { return p.template cast<double>(); });
}

HpPolynomial Polynomial::to_hp() const {
  return visit([](const auto& p) { return p.template cast<HpReal>(); });
}

std::vector<double> Polynomial::descending_doubles() const { return to_float().descending(); }

Polynomial derivative(const Polynomial& p, int s) {
  return p.visit([s](const auto& q) { return Polynomial(derivative(q, s)); });
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  ExactPolynomial parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    ExactPolynomial p = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + peek() + "'");
    if (p.is_zero()) fail("polynomial is identically zero", 0);
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  ExactPolynomial expr() {
    ExactPolynomial acc = term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c == '+') {
        ++pos_;
        acc = acc + term();
      } else if (c == '-') {
        ++pos_;
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  // factor (('*' | '/' | juxtaposition) factor)*
  ExactPolynomial term() {
    ExactPolynomial acc = unary();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * unary();
      } else if (c == '/') {
        const std::size_t at = ++pos_;
        const ExactPolynomial d = unary();
        if (d.degree() != 0) fail("division by a non-constant", at);
        acc = Rational(1) / d.leading() * acc;
      } else if (c == '(' || c == 'x' || c == 'X' || std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        acc = acc * unary();
      } else {
        return acc;
      }
    }
  }

  ExactPolynomial unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    ExactPolynomial base = primary();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t at = pos_;
      bool braced = false;
      if (peek() == '{') {
        braced = true;
        ++pos_;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected non-negative integer exponent");
      long e = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        e = e * 10 + (text_[pos_++] - '0');
        if (e > 1000) fail("exponent too large", at);
      }
      if (braced) {
        if (peek() != '}') fail("expected '}'");
        ++pos_;
      }
      base = power(base, static_cast<int>(e));
    }
    return base;
  }

  ExactPolynomial primary() {
    skip_ws();
    const char c = peek();
    if (c == 'x' || c == 'X') {
      ++pos_;
      return ExactPolynomial(std::vector<Rational>{Rational(0), Rational(1)});
    }
    if (c == '(') {
      ++pos_;
      ExactPolynomial inner = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ExactPolynomial::constant(number());
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  // Decimal literal with optional fraction and exponent, read exactly.
  Rational number() {
    const std::size_t start = pos_;
    Integer digits = 0;
    long scale = 0;
    bool any = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      digits = digits * 10 + (text_[pos_++] - '0');
      any = true;
    }
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits = digits * 10 + (text_[pos_++] - '0');
        --scale;
        any = true;
      }
    }
    if (!any) fail("malformed number", start);
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t save = pos_++;
      int sign = 1;
      if (peek() == '+' || peek() == '-') sign = (text_[pos_++] == '-') ? -1 : 1;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
      } else {
        long e = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          e = e * 10 + (text_[pos_++] - '0');
          if (e > 400) fail("exponent too large", save);
        }
        scale += sign * e;
      }
    }
    Rational r(digits);
    const Integer ten_pow = boost::multiprecision::pow(
        Integer(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale < 0) r /= Rational(ten_pow);
    else r *= Rational(ten_pow);
    return r;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename T, typename Fmt>
std::string format_terms(const BasicPolynomial<T>& p, Fmt&& fmt_abs) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const T c = p.coeff(i);
    if (c == T(0)) continue;
    const bool neg = c < T(0);
    const T mag = neg ? T(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    const bool unit = (mag == T(1));
    if (!unit || i == 0) os << fmt_abs(mag);
    if (i >= 1) {
      if (!unit) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace

ExactPolynomial parse_polynomial(std::string_view text) { return PolyParser(text).parse(); }

std::string format_polynomial(const ExactPolynomial& p) {
  return format_terms(p, [](const Rational& r) {
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return r.str();
    return "(" + r.str() + ")";
  });
}

std::string format_polynomial(const FloatPolynomial& p) {
  return format_terms(p, [](double v) { return format_decimal17(v); });
}

}  // namespace rootarr
