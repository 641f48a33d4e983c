#pragma once

// Unlabeled, unordered binary rooted trees in canonical form.
//
// A TreeShape is an immutable value. Internal nodes store their children in
// canonical order: the first child never ranks below the second. Nodes are
// reference counted, so copies are cheap and subtrees may be shared freely.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>

namespace cptree {

class TreeShape {
public:
    /// The single leaf.
    TreeShape() noexcept = default;

    /// Internal node over {a, b}; the children are reordered into canonical order.
    static TreeShape join(TreeShape a, TreeShape b);

    bool is_leaf() const noexcept { return node_ == nullptr; }
    std::size_t leaf_count() const noexcept;
    /// Edges on the longest root-to-leaf path.
    std::size_t height() const noexcept;

    /// Children of an internal node; throws std::logic_error on a leaf.
    const TreeShape& first() const;
    const TreeShape& second() const;

    /// Address shared by all copies of this value; nullptr for the leaf.
    /// Usable as a memoization key, never as an equality test.
    const void* identity() const noexcept { return node_.get(); }

    friend bool operator==(const TreeShape& a, const TreeShape& b);
    friend std::strong_ordering operator<=>(const TreeShape& a, const TreeShape& b);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

struct ShapeMetrics {
    std::size_t leaves = 1;
    std::size_t height = 0;
    /// s(t): internal nodes whose two subtrees have the same shape.
    std::size_t symmetric_nodes = 0;
    /// d_r(t): r -> number of internal nodes with r descendant leaves (r >= 2).
    std::map<std::size_t, std::size_t> subtree_leaf_counts;
};

TreeShape leaf() noexcept;
TreeShape node(TreeShape a, TreeShape b);

/// Orders shapes exactly as their ranks are ordered, without big integers.
std::strong_ordering compare_shapes(const TreeShape& a, const TreeShape& b);

ShapeMetrics metrics(const TreeShape& t);

/// Checks the canonical child order at every internal node.
bool is_canonical(const TreeShape& t);

/// The n-leaf caterpillar (n >= 1), height n - 1.
TreeShape caterpillar(std::size_t n);

/// The n-leaf pseudocaterpillar (n >= 4): a chain ending in two cherries, height n - 2.
TreeShape pseudocaterpillar(std::size_t n);

}  // namespace cptree
