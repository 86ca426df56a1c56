#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace cyield::core {

// Exact arithmetic for invariant checks and token ledgers.
using Rational = boost::multiprecision::mpq_rational;

// Parses a plain decimal ("12.5", "-0.003", "7") or a fraction ("1/3") exactly.
Rational parse_rational(std::string_view text);

// Exact square root when both numerator and denominator are perfect squares;
// throws NumericError otherwise.
Rational exact_sqrt(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

// Decimal string with up to `digits` significant digits (for reports).
std::string to_string(const Rational& q, int digits = 17);

} // namespace cyield::core
