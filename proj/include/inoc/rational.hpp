#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace inoc {

/// Exact rational arithmetic for all cost bookkeeping. Equilibrium membership
/// hinges on strict vs weak inequalities at knife-edge parameters, so costs
/// are never compared through floating point.
using Rational = mpq_class;

/// mpq_class(num, den) does not reduce to canonical form, and GMP comparisons
/// assume it. All ratio construction goes through here.
inline Rational make_rational(long numerator, long denominator) {
    Rational r(numerator, denominator);
    r.canonicalize();
    return r;
}

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1.5") exactly.
/// Throws InputError on anything else (including non-finite notation).
Rational parse_rational(std::string_view text);

/// "p/q", or just "p" when the denominator is 1.
std::string fraction_string(const Rational& value);

/// Decimal rendering with the given number of significant digits.
std::string decimal_string(const Rational& value, int significant_digits = 12);

long floor_long(const Rational& value);
long ceil_long(const Rational& value);
bool is_integer(const Rational& value);

}  // namespace inoc
