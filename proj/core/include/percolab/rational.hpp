#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace percolab {

// Arbitrary precision rational used for every exact quantity (weights,
// return probabilities, boundary ratios, function values).
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// "num/den" (or "num" when the denominator is 1).
std::string to_string(const Rational& q);

// Accepts "num", "num/den", with optional sign. Throws ParseError.
Rational parse_rational(std::string_view text);

}  // namespace percolab
