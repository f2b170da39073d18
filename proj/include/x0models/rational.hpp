#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "x0models/errors.hpp"

namespace x0models {

// All arithmetic in the library is exact. Integer counts and multiplicities
// use arbitrary-precision integers; everything that can be fractional uses
// arbitrary-precision rationals. Doubles appear only in report fields.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer ipow(const Integer& base, unsigned exp) {
  Integer r = 1;
  Integer b = base;
  while (exp != 0) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

/// Narrows a rational known to be an integer; throws internal_error if the
/// denominator did not cancel.
inline Integer to_integer(const Rational& r, const char* what = "value") {
  if (!is_integral(r))
    throw internal_error(std::string(what) + " is not integral: " +
                         r.str());
  return numerator(r);
}

/// Renders "num" when the denominator is 1, "num/den" otherwise.
inline std::string rational_to_string(const Rational& r) {
  if (is_integral(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses the output of rational_to_string (also accepts "num/1").
inline Rational rational_from_string(std::string_view s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(Integer(std::string(s)));
    Integer num{std::string(s.substr(0, slash))};
    Integer den{std::string(s.substr(slash + 1))};
    if (den == 0) throw invalid_input("rational with zero denominator: " + std::string(s));
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw invalid_input("cannot parse rational: " + std::string(s));
  }
}

inline double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace x0models
