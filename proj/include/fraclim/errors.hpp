#pragma once

#include <stdexcept>
#include <string>

namespace fraclim {

// Bad arguments or malformed inputs (CLI exit code 2).
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// A parameter regime the theory excludes, e.g. s*p <= 1 where s*p > 1 is required
// (CLI exit code 2).
class RegimeError : public std::domain_error {
public:
    explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// Iterative solver failed to converge within its budget (CLI exit code 3).
// Carries the last iterate's diagnostics so callers can inspect it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_value, int iterations, double residual)
        : std::runtime_error(what), last_value(last_value), iterations(iterations), residual(residual) {}
    double last_value;
    int iterations;
    double residual;
};

// Two adjacent string-method states collapsed onto each other (CLI exit code 3).
class DegeneratePathError : public std::runtime_error {
public:
    explicit DegeneratePathError(const std::string& what) : std::runtime_error(what) {}
};

// I/O failure, annotated with the path involved.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fraclim
