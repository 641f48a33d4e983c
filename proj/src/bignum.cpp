#include "cptree/bignum.hpp"

#include "cptree/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace cptree {

std::string to_decimal(const BigNat& value) { return value.get_str(10); }

std::string to_fraction(const BigRat& value) {
    BigRat canonical = value;
    canonical.canonicalize();
    return canonical.get_num().get_str(10) + "/" + canonical.get_den().get_str(10);
}

BigNat parse_decimal(std::string_view text) {
    if (text.empty()) {
        throw DomainError("expected a decimal integer, got an empty string");
    }
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw DomainError("expected a non-negative decimal integer, got '" + std::string(text) + "'");
        }
    }
    return BigNat(std::string(text), 10);
}

double natural_log(const BigNat& value) {
    if (sgn(value) <= 0) {
        throw DomainError("logarithm of a non-positive integer");
    }
    long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double natural_log(const BigRat& value) {
    if (sgn(value) <= 0) {
        throw DomainError("logarithm of a non-positive rational");
    }
    return natural_log(BigNat(value.get_num())) - natural_log(BigNat(value.get_den()));
}

double log2_ln(const BigNat& value) {
    if (value <= 1) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::log2(natural_log(value));
}

double log2_ln(const BigRat& value) {
    if (value <= 1) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    // ln(p/q) for p/q close to 1 loses digits through the subtraction; use
    // log1p on (p - q)/q in that regime.
    const BigNat num = value.get_num();
    const BigNat den = value.get_den();
    const BigRat excess = BigRat(num - den, den);
    if (excess < 1) {
        return std::log2(std::log1p(excess.get_d()));
    }
    return std::log2(natural_log(value));
}

BigNat factorial(std::uint64_t n) {
    BigNat result;
    mpz_fac_ui(result.get_mpz_t(), n);
    return result;
}

BigNat binomial(std::uint64_t n, std::uint64_t k) {
    BigNat result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

BigNat pow2(std::uint64_t exponent) {
    BigNat result = 1;
    mpz_mul_2exp(result.get_mpz_t(), result.get_mpz_t(), exponent);
    return result;
}

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

}  // namespace cptree
