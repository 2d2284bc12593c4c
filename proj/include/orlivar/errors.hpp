#pragma once

#include <stdexcept>
#include <string>

namespace orlivar {

/// Adaptive quadrature could not reach the requested tolerance within its
/// evaluation budget.
struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// A bisection bracket whose indicator is not monotone across the endpoints.
struct BracketInvalid : std::runtime_error {
    explicit BracketInvalid(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace orlivar
