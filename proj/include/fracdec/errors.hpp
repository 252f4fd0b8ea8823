#pragma once

#include <stdexcept>
#include <string>

namespace fracdec {

/// Bad input: out-of-domain arguments, malformed files, invariant violations
/// in user-supplied data. The CLI maps these to exit status 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A well-formed input on which the computation itself cannot proceed
/// (undefined utility, singular system, failed training). Exit status 2.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IngestionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class LookupError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EvaluationError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class DegenerateError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class FeasibilityError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class SolverError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class DataError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class ReplicateFailure : public ComputationError {
public:
    using ComputationError::ComputationError;
};

}  // namespace fracdec
