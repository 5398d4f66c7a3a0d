#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robscatter {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a scalar function (e.g. x < 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input data or configuration violates a model constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A non-finite value came out of a user-supplied function.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// An iterative solver stopped before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations, double last_residual)
        : Error(what + " (iterations=" + std::to_string(iterations)
                + ", residual=" + std::to_string(last_residual) + ")"),
          iterations_(iterations), last_residual_(last_residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    std::size_t iterations_;
    double last_residual_;
};

/// Ill-conditioned or indefinite iterate encountered during a solve.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace robscatter
