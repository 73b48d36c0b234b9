#pragma once

#include <stdexcept>
#include <string>

namespace hermtrace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented range of an operation.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed matrix file or other textual input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Cutoff policy or run configuration violating its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the convergence domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation too close to a pole of a rational function.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Iterative routine did not converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Enumeration or memory budget exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Input lacks the sparsity structure an operation requires.
class StructureError : public Error {
public:
    using Error::Error;
};

}  // namespace hermtrace
