#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace peersel {

// All scores, shares and probabilities are exact rationals. The apportionment
// loop compares remaining probability masses for equality, which floating
// point cannot do reliably, so the whole pipeline stays in mpq.
using Rat = mpq_class;
using Int = mpz_class;

/// Parses a plain decimal string ("80", "-1.25", "0.7272") into an exact
/// rational. Throws std::invalid_argument on anything else (no exponents,
/// no fraction syntax).
Rat parse_decimal(std::string_view text);

/// Parses a comma-separated list of decimals, e.g. "1.1,2.1,1.3".
std::vector<Rat> parse_decimal_list(std::string_view text);

/// Always renders an explicit denominator in lowest terms: 1 -> "1/1".
std::string format_fraction(const Rat& value);

/// Fixed-point decimal with `digits` fractional digits, ties rounded to even.
/// Exact: the rational is scaled by 10^digits and rounded in integers.
std::string format_decimal(const Rat& value, int digits);

/// Decimal rendering of sqrt(value) with `digits` fractional digits,
/// ties-to-even, computed with integer square roots (no floating point).
/// Requires value >= 0.
std::string format_sqrt_decimal(const Rat& value, int digits);

Int rat_floor(const Rat& value);
Int rat_ceil(const Rat& value);
/// value - floor(value), in [0, 1).
Rat rat_frac(const Rat& value);
bool rat_is_integer(const Rat& value);

inline double rat_to_double(const Rat& value) { return value.get_d(); }

}  // namespace peersel
