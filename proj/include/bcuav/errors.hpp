#pragma once

#include <stdexcept>
#include <string>

namespace bcuav {

// Error categories map 1:1 onto CLI exit codes, see tools/bcuav_main.cpp.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or scenario validation failure (names the offending field).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed input file (JSON schema / syntax).
struct ParseError : Error {
    using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

// Iterative solver failed to converge; carries the last residual.
struct SolverError : Error {
    SolverError(const std::string& msg, double residual = 0.0)
        : Error(msg), residual(residual) {}
    double residual;
};

}  // namespace bcuav
