#ifndef SADDLE_ERROR_HPP
#define SADDLE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace saddle {

/// Caller violated a precondition (dimension mismatch, bad flag value, ...).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix that must be SPD failed a definiteness check.
struct DefinitenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix that must have full rank is (numerically) rank deficient.
struct RankError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problem size exceeds a configured cap (dense eigensolver, index type, ...).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative kernel failed to converge where convergence is contractual.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace saddle

#endif
