#pragma once

#include <stdexcept>
#include <string>

namespace kgenfit {

// Malformed input file (bad row, missing header, unparseable number).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a data invariant
// (nonpositive price, duplicate date, too few rows).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input that is valid but unusable for the requested operation
// (empty tail, zero variance).
struct DegenerateInputError : std::runtime_error {
    explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimizer failed to converge from every start.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical integration could not reach the requested accuracy.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kgenfit
