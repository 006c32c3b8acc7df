#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dpca {

/// Raised when an argument violates an operation's precondition.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an enumeration would exceed its configured cap.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
            : std::runtime_error(what + " (requested " + std::to_string(requested) + ", cap " +
                                 std::to_string(cap) + ")"),
              requested_(requested),
              cap_(cap) {}

    std::uint64_t requested() const { return requested_; }
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t requested_;
    std::uint64_t cap_;
};

}  // namespace dpca
