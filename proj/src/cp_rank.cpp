#include "cptree/cp_rank.hpp"

#include "cptree/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace cptree {

const BigNat& RankCache::rank(const TreeShape& t) {
    static const BigNat one = 1;
    if (t.is_leaf()) {
        return one;
    }
    if (auto it = ranks_.find(t.identity()); it != ranks_.end()) {
        return it->second;
    }
    const BigNat& left = rank(t.first());
    const BigNat& right = rank(t.second());
    BigNat value = left * (left - 1);
    value /= 2;
    value += 1;
    value += right;
    return ranks_.emplace(t.identity(), std::move(value)).first->second;
}

BigNat rank(const TreeShape& t) {
    RankCache cache;
    return cache.rank(t);
}

namespace {

// Largest L with L(L-1)/2 + 2 <= k, for k >= 2.
std::uint64_t left_rank_small(std::uint64_t k) {
    const std::uint64_t x = 8 * (k - 2) + 1;
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (root * root > x) {
        --root;
    }
    while ((root + 1) * (root + 1) <= x) {
        ++root;
    }
    std::uint64_t left = (1 + root) / 2;
    while (left * (left + 1) / 2 + 1 < k) {
        ++left;
    }
    while (left * (left - 1) / 2 + 2 > k) {
        --left;
    }
    return left;
}

TreeShape unrank_small(std::uint64_t k) {
    if (k == 1) {
        return leaf();
    }
    const std::uint64_t left = left_rank_small(k);
    const std::uint64_t right = k - left * (left - 1) / 2 - 1;
    TreeShape a = unrank_small(left);
    TreeShape b = unrank_small(right);
    return node(std::move(a), std::move(b));
}

// Comfortably below the point where 8(k - 2) + 1 overflows 64 bits.
constexpr std::uint64_t small_rank_limit = std::uint64_t{1} << 58;

BigNat triangle(const BigNat& m) {
    BigNat t = m * (m - 1);
    t /= 2;
    return t;
}

TreeShape unrank_big(const BigNat& k) {
    if (k < small_rank_limit) {
        return unrank_small(k.get_ui());
    }
    BigNat x = 8 * (k - 2) + 1;
    BigNat root;
    mpz_sqrt(root.get_mpz_t(), x.get_mpz_t());
    BigNat left = (1 + root) / 2;
    while (triangle(left + 1) + 1 < k) {
        ++left;
    }
    while (triangle(left) + 2 > k) {
        --left;
    }
    const BigNat right = k - triangle(left) - 1;
    TreeShape a = unrank_big(left);
    TreeShape b = unrank_big(right);
    return node(std::move(a), std::move(b));
}

}  // namespace

TreeShape unrank(const BigNat& k) {
    if (sgn(k) <= 0) {
        throw DomainError("ranks start at 1");
    }
    return unrank_big(k);
}

const BigNat& ExtremalSeqs::d_at(std::size_t h) const {
    if (h < 2) {
        throw DomainError("pseudocaterpillar ranks start at height 2");
    }
    return d.at(h - 2);
}

namespace {

BigNat next_extremal(const BigNat& x) {
    BigNat next = x * (x - 1);
    next /= 2;
    next += 2;
    return next;
}

}  // namespace

ExtremalSeqs extremal_seqs(std::size_t h_max) {
    ExtremalSeqs seqs;
    seqs.c.reserve(h_max + 1);
    seqs.c.emplace_back(1);
    for (std::size_t h = 1; h <= h_max; ++h) {
        seqs.c.push_back(next_extremal(seqs.c.back()));
    }
    if (h_max >= 2) {
        seqs.d.emplace_back(4);
        for (std::size_t h = 3; h <= h_max; ++h) {
            seqs.d.push_back(next_extremal(seqs.d.back()));
        }
    }
    return seqs;
}

std::pair<BigNat, BigNat> height_rank_bounds(std::size_t h) {
    const ExtremalSeqs seqs = extremal_seqs(h + 1);
    return {seqs.c[h], seqs.c[h + 1] - 1};
}

BigNat count_by_height(std::size_t h, HeightCountMode mode) {
    const ExtremalSeqs seqs = extremal_seqs(h + 1);
    return mode == HeightCountMode::at_most ? BigNat(seqs.c[h + 1] - 1) : BigNat(seqs.c[h + 1] - seqs.c[h]);
}

namespace {

__extension__ using u128 = unsigned __int128;

constexpr u128 two_pow_64 = u128{1} << 64;

// Either the exact rank (while it fits comfortably in 128 bits) or
// log2(ln rank).
struct Magnitude {
    bool exact = true;
    u128 value = 1;
    long double loglog = 0.0L;
};

long double loglog_of(const Magnitude& m) {
    return m.exact ? std::log2(std::log(static_cast<long double>(m.value))) : m.loglog;
}

Magnitude combine(const Magnitude& left, const Magnitude& right) {
    Magnitude out;
    if (left.exact && left.value < two_pow_64) {
        // right <= left, so this cannot overflow.
        out.value = left.value * (left.value - 1) / 2 + 1 + right.value;
    } else {
        // ln f = 2 ln L - ln 2 + O(1/L), with L >= 2^64.
        const long double ln2 = std::numbers::ln2_v<long double>;
        const long double y = loglog_of(left);
        out.exact = false;
        out.loglog = y + 1.0L + std::log1p(-0.5L * ln2 * std::exp2(-y)) / ln2;
    }
    return out;
}

// Post-order over distinct subtrees with an explicit stack.
Magnitude magnitude(const TreeShape& t) {
    std::unordered_map<const void*, Magnitude> memo;
    auto lookup = [&](const TreeShape& u) -> const Magnitude* {
        static const Magnitude leaf_magnitude{};
        if (u.is_leaf()) {
            return &leaf_magnitude;
        }
        const auto it = memo.find(u.identity());
        return it == memo.end() ? nullptr : &it->second;
    };
    std::vector<const TreeShape*> pending{&t};
    while (!pending.empty()) {
        const TreeShape* u = pending.back();
        if (lookup(*u)) {
            pending.pop_back();
            continue;
        }
        const Magnitude* left = lookup(u->first());
        const Magnitude* right = lookup(u->second());
        if (left && right) {
            const Magnitude value = combine(*left, *right);
            memo.emplace(u->identity(), value);
            pending.pop_back();
            continue;
        }
        if (!right) {
            pending.push_back(&u->second());
        }
        if (!left) {
            pending.push_back(&u->first());
        }
    }
    return *lookup(t);
}

}  // namespace

double double_log_rank(const TreeShape& t) {
    if (t.is_leaf()) {
        throw DomainError("log2 ln f is undefined for the single leaf (f = 1)");
    }
    return static_cast<double>(loglog_of(magnitude(t)));
}

}  // namespace cptree
