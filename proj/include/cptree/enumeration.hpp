#pragma once

// Exact counting, exhaustive shape enumeration, and exact per-shape
// probabilities and moments under the random-tree models.

#include "cptree/bignum.hpp"
#include "cptree/model.hpp"
#include "cptree/tree_shape.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cptree {

inline constexpr std::size_t default_enumeration_cap = 16;

/// U_n, the number of shapes with n leaves (Wedderburn-Etherington).
BigNat wedderburn(std::size_t n);

/// U_0..U_{n_max} with U_0 = 0.
std::vector<BigNat> wedderburn_table(std::size_t n_max);

/// K_{n-1} = binom(2n-2, n-1)/n, the number of ordered binary trees with n leaves.
BigNat catalan_tree_count(std::size_t n);

/// (2n-3)!!, the number of leaf-labeled binary trees with n leaves.
BigNat labeled_tree_count(std::size_t n);

/// All shapes with 1..max_leaves leaves, each list sorted by ascending rank.
/// Lists for larger sizes share their subtrees with the smaller lists.
class ShapeCatalog {
public:
    explicit ShapeCatalog(std::size_t max_leaves);

    std::size_t max_leaves() const noexcept { return by_size_.size() - 1; }
    /// Throws DomainError when n is 0 or above max_leaves().
    const std::vector<TreeShape>& shapes(std::size_t n) const;

private:
    std::vector<std::vector<TreeShape>> by_size_;
};

/// The U_n shapes with n leaves in ascending rank order.
std::vector<TreeShape> enumerate_shapes(std::size_t n, std::size_t cap = default_enumeration_cap);

/// Exact probability of shape t under the model, for n = leaf_count(t).
BigRat shape_probability(const TreeShape& t, Model model);

/// (n-1)!/prod_{r=2}^{n} (r-1)^{d_r(t)}, the number of bifurcation orders
/// that produce a labeling of t.
BigNat labeled_histories(const TreeShape& t);

/// pi_n, the probability of the caterpillar, from closed forms (n >= 2).
BigRat caterpillar_probability(std::size_t n, Model model);

struct MomentsReport {
    std::size_t n = 0;
    Model model = Model::uniform_labeled;
    /// Rank moments; empty above MomentsLimits::rank_moments_cap.
    std::optional<BigRat> e_f;
    std::optional<BigRat> e_f2;
    std::optional<BigRat> v_f;
    /// E{log2 ln f}, accumulated in ascending rank order with compensated summation.
    double e_loglog_f = 0.0;
    BigRat e_height;
    BigRat caterpillar_prob;
};

struct MomentsLimits {
    std::size_t rank_moments_cap = default_enumeration_cap;
    std::size_t max_leaves = 20;
};

MomentsReport exact_moments(std::size_t n, Model model, const MomentsLimits& limits = {});

/// Same, reusing an existing catalog (which must cover n).
MomentsReport exact_moments(const ShapeCatalog& catalog, std::size_t n, Model model,
                            const MomentsLimits& limits = {});

}  // namespace cptree
