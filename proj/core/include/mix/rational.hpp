#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace mix {

/// Exact rational scalar used for certificates and rational-mode inputs.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "3", "-1.25", "2.5e-3" or "1/3" into an exact rational.
/// Decimal text is read exactly, so "0.1" is 1/10 and not the nearest double.
Rational parse_rational(std::string_view text);

/// The exact decimal value of the shortest text that round-trips `value`.
/// Throws InvalidInput for NaN or infinities.
Rational rational_from_decimal_double(double value);

/// The exact binary value of `value` (no decimal reinterpretation).
Rational rational_from_double(double value);

double to_double(const Rational& value);
std::vector<double> to_doubles(const std::vector<Rational>& values);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// Least common multiple of the denominators.
BigInt common_denominator(const std::vector<Rational>& values);

}  // namespace mix
