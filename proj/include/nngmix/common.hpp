#pragma once

#include <stdexcept>
#include <string>

namespace nngmix {

/// Invalid configuration: bad hyperparameters, malformed config files,
/// unusable grid axes. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent data: malformed CSV cells, label violations,
/// empty inputs, dimension mismatches. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at runtime: divergence, non-finite intermediates.
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nngmix
