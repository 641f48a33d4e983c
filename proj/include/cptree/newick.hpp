#pragma once

// Newick ingestion and emission for tree shapes.
//
// Accepted grammar:
//   Tree    := Subtree ";"
//   Subtree := Leaf | "(" Subtree "," Subtree ")" Label? Length?
//   Leaf    := Label? Length?
//   Label   := run of characters other than ( ) , : ; and whitespace,
//              or a single-quoted string ('' escapes a quote)
//   Length  := ":" decimal
// Whitespace between tokens is ignored. Labels, lengths and child order are
// discarded; the result is the canonical shape.

#include "cptree/tree_shape.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cptree {

class NewickError : public std::runtime_error {
public:
    NewickError(const std::string& message, std::size_t position);
    /// Zero-based byte offset in the input.
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class NewickSyntaxError : public NewickError {
public:
    using NewickError::NewickError;
};

/// A node with a number of children other than zero or two.
class NonBinaryNodeError : public NewickError {
public:
    using NewickError::NewickError;
};

TreeShape parse_newick(std::string_view text);

/// Unlabeled, no lengths, canonical child order, trailing ';'.
std::string to_newick(const TreeShape& t);

}  // namespace cptree
