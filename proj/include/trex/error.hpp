#pragma once

#include <stdexcept>
#include <string>

namespace trex {

/// Malformed or inconsistent input data (exit code 2 at the CLI).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or mutually inconsistent configuration (exit code 3).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure could not produce a result (exit code 4).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trex
