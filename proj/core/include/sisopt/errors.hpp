#ifndef SISOPT_ERRORS_HPP
#define SISOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sisopt {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad sizes, bad values, unparsable files.
class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SpaceMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonPositiveWeight : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NegativeKernelEntry : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonPositiveGamma : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidGroupCount : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NegativeEpsilon : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidExponent : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfRangeState : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BudgetOutOfRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class LossOutOfRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class TooManySites : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class WeightMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MappingInconsistent : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Loss is identically zero; the bi-objective problem degenerates.
class DegenerateLoss : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical failures. Subclasses carry partial results where the solver
/// produced something usable before giving up.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepTooLarge : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MonotonicityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MaximalityUncertified : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotAnEquilibrium : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateEigenpair : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace sisopt

#endif
