#pragma once

#include <stdexcept>
#include <string>

namespace ggbm {

// Thrown when an iterative numeric scheme fails to reach its certified
// stopping condition (continued fraction, adaptive quadrature, projection
// scheme, bisection).  Callers never receive a silent guess.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ggbm
