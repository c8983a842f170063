#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bfa {

// Bad argument values, malformed masks, domain violations.
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Work or memory beyond the configured caps, exact-arithmetic overflow.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files; offset is the byte position of the first bad byte.
struct parse_error : input_error {
    parse_error(const std::string& what, std::size_t byte_offset)
        : input_error(what + " (byte " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

}  // namespace bfa
