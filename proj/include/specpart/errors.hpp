#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specpart {

// Malformed input file; line numbers are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// The LOBPCG trial basis lost rank and rank repair could not recover
// enough columns, even after the steepest-descent retry.
class BreakdownError : public std::runtime_error {
public:
    BreakdownError(int iteration, bool retried)
        : std::runtime_error("eigensolver breakdown at iteration " + std::to_string(iteration) +
                             (retried ? " (after retry without search directions)" : "")),
          iteration_(iteration), retried_(retried) {}

    int iteration() const noexcept { return iteration_; }
    bool retried() const noexcept { return retried_; }

private:
    int iteration_;
    bool retried_;
};

// Configuration that cannot be satisfied on the given input (K > n, d > n, ...).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// A vertex of degree zero where a positive degree is required (normalized Laplacian).
class DegenerateDegreeError : public std::runtime_error {
public:
    explicit DegenerateDegreeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape mismatch between operators and blocks. Always a caller bug.
class DimensionError : public std::logic_error {
public:
    explicit DimensionError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace specpart
