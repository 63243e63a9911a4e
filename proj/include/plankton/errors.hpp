#pragma once

#include <stdexcept>
#include <string>

namespace plankton {

/// Invalid model/scenario configuration or a violated call precondition.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Breakdown inside a numerical routine (singular solve, non-convergence, NaN state).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// File read/write failure, including malformed input files.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plankton
