#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ouq {

/// Input violates a documented precondition (malformed distribution,
/// out-of-range parameter, inconsistent shapes).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Class or split index outside its admissible range.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A file does not match its expected schema. Carries the 1-based line
/// number when one is known (0 otherwise).
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The requested quantity is mathematically undefined for the given input
/// (e.g. a prediction-rejection ratio on an error-free record set).
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical invariant that holds analytically was violated by more than
/// float noise. Indicates malformed upstream data or a bug.
class NumericalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace ouq
