#pragma once

#include <stdexcept>
#include <string>

namespace uavsec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A protected-zone request violates the bounds of its kind.
class InfeasibleZoneError : public Error {
public:
    explicit InfeasibleZoneError(const std::string& what) : Error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

/// A distribution has collapsed (empty support region).
class DegenerateDistributionError : public Error {
public:
    explicit DegenerateDistributionError(const std::string& what) : Error(what) {}
};

/// Adaptive quadrature failed to reach the requested tolerance.
/// Carries the best estimate achieved and its error bound.
class NumericToleranceError : public Error {
public:
    NumericToleranceError(const std::string& what, double estimate, double err)
        : Error(what), estimate_(estimate), error_bound_(err) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Configuration file problem: parse failure or invariant violation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace uavsec
