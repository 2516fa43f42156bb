#pragma once

#include <stdexcept>
#include <string>

namespace dtaoi {

// Rejected user input: scenario, search spec, configuration, trace schedule.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base of every failure raised by the numerical pipeline.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// QBD blocks are not substochastic / do not form a stochastic P.
class StructureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Rate matrix with spectral radius at (or numerically at) one.
class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Boundary eigenvalue one is not simple.
class AmbiguousBoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Conditioning on a phase subset that carries no stationary mass.
class ZeroMassError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IterationCapError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace dtaoi
