#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratkit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (shape mismatch, bad argument).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// LU met a pivot below the singularity threshold.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t column, const std::string& what)
        : Error(what), column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// Cholesky met a non-positive pivot.
class NotSpdError : public Error {
public:
    NotSpdError(std::size_t column, const std::string& what)
        : Error(what), column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// I - lambda*H is singular to working precision, so f(H) does not exist.
class SingularFunctionError : public Error {
public:
    using Error::Error;
};

/// CG detected p^T A p <= 0.
class IndefiniteMatrixError : public Error {
public:
    IndefiniteMatrixError(std::size_t iteration, const std::string& what)
        : Error(what), iteration_(iteration) {}
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class UnsupportedProblemError : public Error {
public:
    using Error::Error;
};

/// A bound was requested outside the region where it is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

class DegenerateDenominatorError : public Error {
public:
    using Error::Error;
};

} // namespace ratkit
