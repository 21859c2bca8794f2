#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace hopfavg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model or argument (violated type invariant or precondition).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Evaluation outside a function's domain, e.g. querying a trajectory past t_end.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The linear part admits no consistent critical delay.
class NoHopfError : public Error {
public:
    using Error::Error;
};

/// Degenerate bifurcation data: tied critical delays, vanishing transversality,
/// singular Gram matrix.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& message, int line, int column)
        : Error(format(message, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, int line, int column) {
        if (line <= 0) return message;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    int line_;
    int column_;
};

}  // namespace hopfavg
