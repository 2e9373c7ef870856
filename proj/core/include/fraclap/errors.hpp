#ifndef FRACLAP_ERRORS_HPP
#define FRACLAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fraclap {

// Root of the library's exception hierarchy. The two branches matter for
// callers that map failures to process exit codes: ValidationError means the
// inputs (parameters, profiles, grids) were rejected, NumericalError means a
// computation started from valid inputs and failed to produce a trustworthy
// result.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// weights ---------------------------------------------------------------

class DiniDivergentError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonMonotoneError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EnvelopeViolationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BadTauError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// kernel ----------------------------------------------------------------

class BadOrderError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SingularDiagonalError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GridTooCoarseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GridMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// potential -------------------------------------------------------------

class NonIntegrableTailError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonzeroSourceLimitError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonPositiveValuesError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// solver ----------------------------------------------------------------

class CannotFitBudgetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotOrderedError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class LinearSolveFailureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TailNotSettledError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace fraclap

#endif
