#include "beurlab/errors.hpp"

#include <utility>

namespace beurlab {

LexError::LexError(const std::string& what, std::size_t position)
    : Error(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

std::string describe(const std::string& what, std::size_t position, const std::vector<std::string>& expected) {
    std::string out = what + " at position " + std::to_string(position);
    if (!expected.empty()) {
        out += "; expected one of:";
        for (const auto& e : expected) out += " " + e;
    }
    return out;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t position, std::vector<std::string> expected)
    : Error(describe(what, position, expected)), position_(position), expected_(std::move(expected)) {}

}  // namespace beurlab
