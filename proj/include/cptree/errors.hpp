#pragma once

#include <stdexcept>
#include <string>

namespace cptree {

/// An argument outside an operation's domain (n = 0, k = 0, n above a cap, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace cptree
