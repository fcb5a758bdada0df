#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace dlc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline std::string to_fraction(const Rational& r) {
  std::string s = boost::multiprecision::numerator(r).str();
  if (boost::multiprecision::denominator(r) != 1)
    s += "/" + boost::multiprecision::denominator(r).str();
  return s;
}

// Decimal with exactly `digits` fractional digits, rounding half away from
// zero. No floating point is involved.
inline std::string to_decimal(const Rational& r, unsigned digits) {
  BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = num * scale;
  BigInt q = scaled / den;
  const BigInt rem = scaled % den;
  if (2 * rem >= den) ++q;

  std::string body = q.str();
  if (digits > 0) {
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
  }
  if (negative && q != 0) body.insert(0, "-");
  return body;
}

}  // namespace dlc
