#include "cptree/tree_shape.hpp"

#include "cptree/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cptree {

struct TreeShape::Node {
    TreeShape first;
    TreeShape second;
    std::size_t leaves;
    std::size_t height;

    Node(TreeShape a, TreeShape b)
        : first(std::move(a)),
          second(std::move(b)),
          leaves(first.leaf_count() + second.leaf_count()),
          height(1 + std::max(first.height(), second.height())) {}

    Node(const Node&) = delete;
    Node& operator=(const Node&) = delete;

    // Releases uniquely owned descendants iteratively so that very deep
    // shapes (long caterpillars) do not recurse once per level.
    ~Node() {
        std::vector<std::shared_ptr<const Node>> pending;
        auto take = [&pending](TreeShape& child) {
            if (child.node_ && child.node_.use_count() == 1) {
                pending.push_back(std::move(child.node_));
            }
        };
        take(first);
        take(second);
        while (!pending.empty()) {
            std::shared_ptr<const Node> current = std::move(pending.back());
            pending.pop_back();
            if (current.use_count() == 1) {
                auto& owned = const_cast<Node&>(*current);
                take(owned.first);
                take(owned.second);
            }
        }
    }
};

TreeShape TreeShape::join(TreeShape a, TreeShape b) {
    if (compare_shapes(a, b) < 0) {
        std::swap(a, b);
    }
    TreeShape result;
    // Allocated non-const so the destructor may detach owned children.
    result.node_ = std::make_shared<Node>(std::move(a), std::move(b));
    return result;
}

std::size_t TreeShape::leaf_count() const noexcept { return node_ ? node_->leaves : 1; }

std::size_t TreeShape::height() const noexcept { return node_ ? node_->height : 0; }

const TreeShape& TreeShape::first() const {
    if (!node_) {
        throw std::logic_error("a leaf has no children");
    }
    return node_->first;
}

const TreeShape& TreeShape::second() const {
    if (!node_) {
        throw std::logic_error("a leaf has no children");
    }
    return node_->second;
}

bool operator==(const TreeShape& a, const TreeShape& b) { return compare_shapes(a, b) == 0; }

std::strong_ordering operator<=>(const TreeShape& a, const TreeShape& b) { return compare_shapes(a, b); }

TreeShape leaf() noexcept { return TreeShape{}; }

TreeShape node(TreeShape a, TreeShape b) { return TreeShape::join(std::move(a), std::move(b)); }

std::strong_ordering compare_shapes(const TreeShape& a, const TreeShape& b) {
    // Lexicographic on (height, first, second), with pending pairs on an
    // explicit stack so deep shapes cannot exhaust the call stack.
    std::vector<std::pair<const TreeShape*, const TreeShape*>> pending{{&a, &b}};
    while (!pending.empty()) {
        const auto [x, y] = pending.back();
        pending.pop_back();
        if (x->identity() == y->identity()) {
            continue;
        }
        if (x->is_leaf() || y->is_leaf()) {
            return x->is_leaf() ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        // Every shape of height h ranks below every shape of height h + 1.
        if (x->height() != y->height()) {
            return x->height() <=> y->height();
        }
        pending.emplace_back(&x->second(), &y->second());
        pending.emplace_back(&x->first(), &y->first());
    }
    return std::strong_ordering::equal;
}

namespace {

// Calls visit on every internal node occurrence, parents before children.
template <typename Visit>
void for_each_internal(const TreeShape& t, Visit visit) {
    std::vector<const TreeShape*> pending{&t};
    while (!pending.empty()) {
        const TreeShape* u = pending.back();
        pending.pop_back();
        if (u->is_leaf()) {
            continue;
        }
        visit(*u);
        pending.push_back(&u->second());
        pending.push_back(&u->first());
    }
}

}  // namespace

ShapeMetrics metrics(const TreeShape& t) {
    ShapeMetrics out;
    out.leaves = t.leaf_count();
    out.height = t.height();
    for_each_internal(t, [&](const TreeShape& u) {
        ++out.subtree_leaf_counts[u.leaf_count()];
        if (compare_shapes(u.first(), u.second()) == 0) {
            ++out.symmetric_nodes;
        }
    });
    return out;
}

bool is_canonical(const TreeShape& t) {
    bool ok = true;
    for_each_internal(t, [&](const TreeShape& u) { ok = ok && compare_shapes(u.first(), u.second()) >= 0; });
    return ok;
}

TreeShape caterpillar(std::size_t n) {
    if (n == 0) {
        throw DomainError("caterpillar needs at least one leaf");
    }
    TreeShape t = leaf();
    for (std::size_t i = 1; i < n; ++i) {
        t = node(std::move(t), leaf());
    }
    return t;
}

TreeShape pseudocaterpillar(std::size_t n) {
    if (n < 4) {
        throw DomainError("pseudocaterpillar needs at least four leaves");
    }
    const TreeShape cherry = node(leaf(), leaf());
    TreeShape t = node(cherry, cherry);
    for (std::size_t i = 4; i < n; ++i) {
        t = node(std::move(t), leaf());
    }
    return t;
}

}  // namespace cptree
