#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace certiq {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotSpdError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    /// Relative residual reached when the iteration was abandoned.
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The numerator form does not vanish on the kernel of the denominator form.
class QuotientUnboundedError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class RefinementBudgetError : public Error {
public:
    using Error::Error;
};

class MeditError : public Error {
public:
    MeditError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace certiq
