#pragma once

#include <stdexcept>
#include <string>

namespace fgplate {

/// Argument outside the physical domain of a function (negative k, z outside
/// the plate, non-positive temperature).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Degenerate or inverted element/plate geometry.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Singular systems, failed eigen iterations, quadrature that did not settle.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent study configuration. `line` is 0 when the
/// offending entry could not be located in a source file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace fgplate
