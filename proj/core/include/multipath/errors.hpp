#pragma once

#include <stdexcept>
#include <string>

namespace multipath {

/// Invalid model data: out-of-range densities, broken cross references,
/// malformed input files, violated structural invariants.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Valid data outside the regime the solver supports: time steps breaking
/// the junction stability bound, boundary data on a region border where no
/// unique stationary state exists, degenerate two-flux configurations.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace multipath
