#pragma once

// Streaming JSON emitter. Reals go out with 17 significant digits, which
// nlohmann::json cannot be told to do; non-finite reals become null.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cptree::detail {

class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);

    JsonWriter& string(std::string_view text);
    JsonWriter& real(double value);
    JsonWriter& integer(std::uint64_t value);
    JsonWriter& boolean(bool value);
    JsonWriter& null();

    /// Terminates the document with a newline; every container must be closed.
    void finish();

private:
    std::ostream& out_;
    // One entry per open container: true once it holds an element.
    std::vector<bool> nonempty_;
    bool after_key_ = false;

    void before_value();
};

std::string json_escape(std::string_view text);

}  // namespace cptree::detail
