#pragma once

#include <stdexcept>
#include <string>

namespace slp {

// Base of every failure thrown by this library. The two families below are
// what the CLI maps to exit codes: DomainError -> 2, ConvergenceError -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid inputs, violated preconditions, malformed files.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative procedures that failed to reach their target, or numerical
// states that signal an upstream computation went wrong.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class PoleEvaluationError : public DomainError {
public:
    using DomainError::DomainError;
};

class InfinityEvaluationError : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidCoefficientsError : public DomainError {
public:
    using DomainError::DomainError;
};

class NotHerglotzError : public DomainError {
public:
    using DomainError::DomainError;
};

class DivisionRemainderError : public DomainError {
public:
    using DomainError::DomainError;
};

class AliasRiskError : public DomainError {
public:
    using DomainError::DomainError;
};

class IndexMismatchError : public DomainError {
public:
    using DomainError::DomainError;
};

class DomainViolationError : public DomainError {
public:
    using DomainError::DomainError;
};

class ZeroDenominatorError : public DomainError {
public:
    using DomainError::DomainError;
};

class OddParityError : public DomainError {
public:
    using DomainError::DomainError;
};

class CharacterizationViolationError : public DomainError {
public:
    using DomainError::DomainError;
};

class IllPosedError : public DomainError {
public:
    using DomainError::DomainError;
};

class NotAnEigenvalueError : public DomainError {
public:
    using DomainError::DomainError;
};

class NonFiniteStateError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class MissedEigenvalueError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class NonPositiveError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class VanishingEigenfunctionError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class SignInconsistencyError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class BaseCaseNoConvergenceError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

} // namespace slp
