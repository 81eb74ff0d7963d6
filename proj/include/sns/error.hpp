#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sns {

/// Base class for everything the toolkit throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model file, bad dimensions, or broken invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, std::vector<std::string> violations = {})
        : Error(what), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Model file could not be read against the schema.
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A chain failed the irreducibility / aperiodicity requirement.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// Singular systems, residuals above tolerance, iteration limits.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace sns
