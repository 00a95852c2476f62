#pragma once

#include <gmpxx.h>

#include <string>

namespace tnum {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal such as "-0.25" exactly.
Rational parse_rational(const std::string& text);

/// Exact binary value of a finite double.
Rational rational_from_double(double v);

std::string to_string(const Rational& q);

/// num / den in canonical form; den may be negative.
Rational ratio(long num, long den);

/// floor(q) as an exact integer-valued rational.
Rational floor(const Rational& q);

}  // namespace tnum
