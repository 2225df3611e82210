#pragma once

#include <stdexcept>
#include <string>

namespace homoghj {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input or configuration (bad id, empty window, precondition).
class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NonConvexFlux : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class EmptyWindow : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class TooFewPoints : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A numerical stage failed. `stage()` names it for diagnostics.
class NumericalFailure : public Error {
public:
    NumericalFailure(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class QuadratureFailure : public NumericalFailure {
public:
    explicit QuadratureFailure(const std::string& what) : NumericalFailure("quadrature", what) {}
};

class MinimizationFailure : public NumericalFailure {
public:
    explicit MinimizationFailure(const std::string& what) : NumericalFailure("minimization", what) {}
};

class BlowUp : public NumericalFailure {
public:
    explicit BlowUp(const std::string& what) : NumericalFailure("fd_solver", what) {}
};

/// The discrete gradient left the ball the monotonicity constraint was sized for.
class GradientBoundExceeded : public NumericalFailure {
public:
    explicit GradientBoundExceeded(const std::string& what) : NumericalFailure("fd_solver", what) {}
};

class LinearSolveFailure : public NumericalFailure {
public:
    explicit LinearSolveFailure(const std::string& what) : NumericalFailure("linear_solve", what) {}
};

class NoConvergence : public NumericalFailure {
public:
    explicit NoConvergence(const std::string& what) : NumericalFailure("howard", what) {}
};

}  // namespace homoghj
