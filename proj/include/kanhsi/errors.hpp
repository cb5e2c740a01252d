#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kanhsi {

/// Caller supplied arguments that violate a precondition (shape, range, config).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A NaN or Inf appeared where finite values are required.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation called in the wrong object state, e.g. backward before forward.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A metric is undefined for the given data (empty matrix, degenerate kappa).
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed binary or text container. Carries the byte offset of the fault.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace kanhsi
