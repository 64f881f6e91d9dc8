#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nabla {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text: function expressions, time-scale descriptors, orders.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t column)
        : Error(what + " at column " + std::to_string(column)), column_(column) {}
    explicit ParseError(const std::string& what) : Error(what), column_(0) {}

    /// 1-based column of the offending character, 0 when not applicable.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// Point outside a time scale, violated precondition, or hypothesis failure.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation of an expression left the real domain (ln of a nonpositive value, ...).
class EvalError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The dense difference quotient did not settle. Carries the quotient trace.
class NotDifferentiable : public DomainError {
public:
    NotDifferentiable(const std::string& what, std::vector<double> trace)
        : DomainError(what), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// A witness or root search ended without a certified answer.
class InconclusiveSearch : public Error {
public:
    using Error::Error;
};

} // namespace nabla
