#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirate {

/// Malformed input file; `line` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A domain-type invariant or operation precondition was violated.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The chain has no unique stationary law. Carries the communicating
/// classes of the positive-transition digraph so callers can report
/// which states fail to communicate (empty when the failure is periodicity).
class ReducibleChainError : public std::runtime_error {
public:
    ReducibleChainError(const std::string& message,
                        std::vector<std::vector<std::int64_t>> classes)
        : std::runtime_error(message), classes_(std::move(classes)) {}

    const std::vector<std::vector<std::int64_t>>& communicating_classes() const noexcept {
        return classes_;
    }

private:
    std::vector<std::vector<std::int64_t>> classes_;
};

/// A numerical postcondition failed that cannot fail on valid inputs
/// (e.g. a variance solving to a clearly negative value).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace dirate
