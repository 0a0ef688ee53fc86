#pragma once

#include <stdexcept>
#include <string>

namespace baker {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

// A QuantizationSpec / EnsembleSpec / manifest entry violates its invariants.
class InvalidSpec : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Eigensolver failed or its result did not pass the residual check.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace baker
