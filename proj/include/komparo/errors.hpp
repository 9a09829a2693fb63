#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace komparo {

// Error taxonomy mirrors the CLI exit-code contract:
// ConfigError -> 1, ParseError/EvalError -> 2, IoError -> 3.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations on library calls (bad grids, empty ladders, ...).
struct InputError : ConfigError {
    using ConfigError::ConfigError;
};

struct GridError : InputError {
    using InputError::InputError;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

struct EvalError : std::runtime_error {
    EvalError(const std::string& message, std::string subexpression)
        : std::runtime_error(message + " in `" + subexpression + "`"),
          subexpression(std::move(subexpression)) {}
    std::string subexpression;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Oracle lattice budget exceeded.
struct BudgetError : InputError {
    using InputError::InputError;
};

// The caller asserted a positive definite f but the lattice says otherwise.
struct PdAssertionError : InputError {
    using InputError::InputError;
};

// Semicontinuity probe radius below the table spacing.
struct NeighborhoodEmptyError : InputError {
    using InputError::InputError;
};

// Level-boundedness ladder produced an annulus with no lattice points.
struct EmptyAnnulusError : InputError {
    using InputError::InputError;
};

}  // namespace komparo
