#pragma once

// Counter-based 64-bit generator.
//
// Output i of stream (seed, stream) is mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
// with key = mix64(seed ^ mix64(stream + 0xD1B54A32D192ED03)), where mix64 is
// the SplitMix64 finalizer (shifts 30, 27, 31; multipliers 0xBF58476D1CE4E5B9
// and 0x94D049BB133111EB). These constants are fixed: golden outputs and
// test expectations depend on them.

#include "cptree/bignum.hpp"

#include <cstdint>
#include <limits>

namespace cptree {

class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, bound); bound must be positive. bound == 1 draws nothing.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform on [0, bound) for a positive big bound, by rejection on whole words.
    BigNat below(const BigNat& bound);

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace cptree
