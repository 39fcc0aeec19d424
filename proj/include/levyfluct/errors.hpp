#pragma once

#include <stdexcept>
#include <string>

namespace levyfluct {

/// Bad configuration: malformed input, invalid parameters, mismatched grids.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A model does not satisfy the standing assumptions required by an operation.
/// The message names the violated clause.
struct assumption_error : std::runtime_error {
    explicit assumption_error(const std::string& what) : std::runtime_error(what) {}
};

/// A built-in consistency check failed beyond its tolerance.
struct verify_error : std::runtime_error {
    explicit verify_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levyfluct
