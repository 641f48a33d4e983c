#pragma once

// A bijection between tree shapes and positive integers.
//
//   f(leaf) = 1
//   f(t)    = f(l)(f(l) - 1)/2 + 1 + f(r),   f(l) >= f(r)
//
// Shapes of height h occupy exactly the rank block [c_h, c_{h+1}), where
// c_0 = 1 and c_{h+1} = c_h(c_h - 1)/2 + 2 is the caterpillar rank.

#include "cptree/bignum.hpp"
#include "cptree/tree_shape.hpp"

#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cptree {

BigNat rank(const TreeShape& t);

/// Throws DomainError for k = 0.
TreeShape unrank(const BigNat& k);

/// Memoizes ranks by subtree identity across many calls. Not thread-safe;
/// keep one per thread or per computation.
class RankCache {
public:
    const BigNat& rank(const TreeShape& t);
    void clear() { ranks_.clear(); }

private:
    std::unordered_map<const void*, BigNat> ranks_;
};

struct ExtremalSeqs {
    /// c[h] = rank of the caterpillar of height h, h = 0..h_max.
    std::vector<BigNat> c;
    /// d_h = rank of the pseudocaterpillar of height h, h = 2..h_max
    /// (stored at d[h - 2]).
    std::vector<BigNat> d;

    const BigNat& c_at(std::size_t h) const { return c.at(h); }
    const BigNat& d_at(std::size_t h) const;
};

ExtremalSeqs extremal_seqs(std::size_t h_max);

/// Inclusive rank range (c_h, c_{h+1} - 1) of the shapes of height h.
std::pair<BigNat, BigNat> height_rank_bounds(std::size_t h);

enum class HeightCountMode { at_most, exactly };

/// Number of shapes with height at most / exactly h.
BigNat count_by_height(std::size_t h, HeightCountMode mode);

/// log2(ln f(t)), inner logarithm natural. Throws DomainError for the leaf.
///
/// Small ranks are evaluated exactly. Once the larger child's rank reaches
/// 2^64 the recursion is carried in the log domain,
///   ln f = 2 ln f(l) - ln 2 + e,   |e| < 2^-63,
/// which keeps the result far inside 1e-12 relative error without ever
/// materializing f(t).
double double_log_rank(const TreeShape& t);

}  // namespace cptree
