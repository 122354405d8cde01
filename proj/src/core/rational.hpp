#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kelvin {

// Arbitrary-precision rational, always canonical (lowest terms, positive
// denominator) after every arithmetic operation.
using Rational = mpq_class;

// Parses "p", "p/q", "+p/q" or "-p/q" with decimal digits. Throws
// Error(kParse) on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

// "p" when the denominator is 1, otherwise "p/q".
std::string format_rational(const Rational& value);

// Decimal rendering rounded to `digits` fractional digits. Display only.
std::string approximate_rational(const Rational& value, int digits);

inline int sign(const Rational& value) { return sgn(value); }

}  // namespace kelvin
