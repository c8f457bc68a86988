#pragma once

#include <stdexcept>
#include <string>

namespace cordreg {

/// Malformed or unsupported input data (bad headers, missing landmarks,
/// violated label conventions). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (non-monotone maps, diverging optimizer, degenerate
/// frames). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cordreg
