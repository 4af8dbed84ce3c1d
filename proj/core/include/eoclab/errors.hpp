#pragma once

#include <stdexcept>
#include <string>

namespace eoclab {

// Bad configuration (unknown activation name, malformed grid spec, ...).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure (non-finite integrand at a quadrature node, ...).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eoclab
