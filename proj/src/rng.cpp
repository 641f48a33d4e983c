#include "cptree/rng.hpp"

#include "cptree/errors.hpp"

#include <vector>

namespace cptree {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), key_(mix64(seed ^ mix64(stream + 0xD1B54A32D192ED03ULL))) {}

CounterRng::result_type CounterRng::operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
    if (bound <= 1) {
        return 0;
    }
    // Lemire's multiply-shift with rejection of the biased low region.
    __extension__ using u128 = unsigned __int128;
    u128 product = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<u128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

BigNat CounterRng::below(const BigNat& bound) {
    if (sgn(bound) <= 0) {
        throw DomainError("uniform draw needs a positive bound");
    }
    if (bound.fits_ulong_p()) {
        return BigNat(below(static_cast<std::uint64_t>(bound.get_ui())));
    }
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    const unsigned top_bits = static_cast<unsigned>(bits - 64 * (words - 1));
    const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << top_bits) - 1;
    std::vector<std::uint64_t> limbs(words);
    BigNat candidate;
    do {
        for (auto& limb : limbs) {
            limb = (*this)();
        }
        limbs.back() &= top_mask;
        // Least significant word first.
        mpz_import(candidate.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, limbs.data());
    } while (candidate >= bound);
    return candidate;
}

}  // namespace cptree
