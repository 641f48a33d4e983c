#pragma once

// Arbitrary-precision naturals and exact rationals, backed by GMP.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace cptree {

using BigNat = mpz_class;
using BigRat = mpq_class;

std::string to_decimal(const BigNat& value);

/// Lowest-terms "numerator/denominator"; the denominator is always printed.
std::string to_fraction(const BigRat& value);

/// Parses a non-negative decimal integer; throws DomainError on anything else.
BigNat parse_decimal(std::string_view text);

/// ln(value) for value >= 1, from the bit length and leading mantissa bits.
/// Never converts the whole value to a fixed-precision float.
double natural_log(const BigNat& value);

/// ln(value) for value > 0.
double natural_log(const BigRat& value);

/// log2(ln(value)); NaN when value <= 1 (the double logarithm is undefined).
double log2_ln(const BigNat& value);
double log2_ln(const BigRat& value);

BigNat factorial(std::uint64_t n);
BigNat binomial(std::uint64_t n, std::uint64_t k);
BigNat pow2(std::uint64_t exponent);

/// binary64 text with 17 significant digits; "nan"/"inf"/"-inf" otherwise.
std::string format_real(double value);

}  // namespace cptree
