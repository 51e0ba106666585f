#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace rootarr {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

// 80 significant decimal digits. Witness polishing and verification run in
// this type so that roots of multiplicity up to ~6 are resolved far below
// the coincidence tolerance.
using HpReal = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<80>,
    boost::multiprecision::et_off>;

template <typename T>
using Complex = std::complex<T>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const HpReal& x) { return x.convert_to<double>(); }

template <typename T>
T from_double(double x) {
  return T(x);
}

template <typename T>
struct ScalarTraits {
  static T epsilon() { return std::numeric_limits<T>::epsilon(); }
  static constexpr bool exact = false;
};

template <>
struct ScalarTraits<Rational> {
  static Rational epsilon() { return Rational(0); }
  static constexpr bool exact = true;
};

using std::abs;
using std::sqrt;
using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

// Shortest decimal with 17 significant digits, the form witnesses are
// serialized in.
std::string format_decimal17(double x);

// Decimal rendering of an exact rational ("p/q" or "p").
std::string format_rational(const Rational& x);

}  // namespace rootarr
