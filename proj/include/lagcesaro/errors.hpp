#pragma once

#include <stdexcept>
#include <string>

namespace lagcesaro {

/// Raised when a parameter set violates a documented admissibility window.
/// The message always quotes the violated inequality.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation cannot be completed at double precision
/// (overflow, non-finite integrand value, eigensolver iteration budget, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lagcesaro
