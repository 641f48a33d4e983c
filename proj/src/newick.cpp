#include "cptree/newick.hpp"

#include <cctype>
#include <charconv>
#include <utility>
#include <vector>

namespace cptree {

NewickError::NewickError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

bool is_label_char(char c) {
    switch (c) {
        case '(':
        case ')':
        case ',':
        case ':':
        case ';':
        case '\'':
            return false;
        default:
            return !std::isspace(static_cast<unsigned char>(c));
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    TreeShape parse() {
        TreeShape t = subtree();
        skip_space();
        if (peek() != ';') {
            fail("expected ';'");
        }
        ++pos_;
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected text after ';'");
        }
        return t;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    [[noreturn]] void fail(const std::string& message) const { throw NewickSyntaxError(message, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    // Shift-reduce over an explicit stack of open parentheses, so nesting
    // depth is limited by memory rather than the call stack.
    TreeShape subtree() {
        struct Open {
            std::size_t position;
            std::vector<TreeShape> children;
        };
        std::vector<Open> open;
        while (true) {
            skip_space();
            if (peek() == '(') {
                open.push_back({pos_, {}});
                ++pos_;
                continue;
            }
            label_and_length();
            TreeShape done = leaf();
            while (true) {
                if (open.empty()) {
                    return done;
                }
                skip_space();
                open.back().children.push_back(std::move(done));
                if (peek() == ',') {
                    ++pos_;
                    break;
                }
                if (peek() != ')') {
                    fail("expected ',' or ')'");
                }
                ++pos_;
                Open top = std::move(open.back());
                open.pop_back();
                if (top.children.size() != 2) {
                    throw NonBinaryNodeError("node with " + std::to_string(top.children.size()) + " children",
                                             top.position);
                }
                label_and_length();
                done = node(std::move(top.children[0]), std::move(top.children[1]));
            }
        }
    }

    void label_and_length() {
        skip_space();
        if (peek() == '\'') {
            quoted_label();
        } else {
            while (pos_ < text_.size() && is_label_char(text_[pos_])) {
                ++pos_;
            }
        }
        skip_space();
        if (peek() == ':') {
            ++pos_;
            skip_space();
            length();
        }
    }

    void quoted_label() {
        const std::size_t open = pos_;
        ++pos_;
        while (true) {
            if (pos_ >= text_.size()) {
                throw NewickSyntaxError("unterminated quoted label", open);
            }
            if (text_[pos_] == '\'') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                return;
            }
            ++pos_;
        }
    }

    void length() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        if (begin != end && *begin == '+') {
            ++begin;
        }
        double value = 0.0;
        const auto [stop, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) {
            fail("expected a decimal branch length");
        }
        pos_ = static_cast<std::size_t>(stop - text_.data());
    }
};

void emit(const TreeShape& t, std::string& out) {
    // Pending items: a subtree to open, or a literal separator.
    struct Item {
        const TreeShape* shape;
        char literal;
    };
    std::vector<Item> pending{{&t, '\0'}};
    while (!pending.empty()) {
        const Item item = pending.back();
        pending.pop_back();
        if (!item.shape) {
            out.push_back(item.literal);
            continue;
        }
        if (item.shape->is_leaf()) {
            continue;
        }
        out.push_back('(');
        pending.push_back({nullptr, ')'});
        pending.push_back({&item.shape->second(), '\0'});
        pending.push_back({nullptr, ','});
        pending.push_back({&item.shape->first(), '\0'});
    }
}

}  // namespace

TreeShape parse_newick(std::string_view text) { return Parser(text).parse(); }

std::string to_newick(const TreeShape& t) {
    std::string out;
    out.reserve(4 * t.leaf_count());
    emit(t, out);
    out.push_back(';');
    return out;
}

}  // namespace cptree
