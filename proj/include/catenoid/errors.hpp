#pragma once

#include <stdexcept>
#include <string>

namespace catenoid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad construction parameters (non-positive throat radius, zero circulation, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two point vortices closer than the collision cutoff on the pair kernel.
/// Indices are -1 when the check happened outside an indexed system.
class CoincidentVortices : public Error {
public:
    CoincidentVortices(int first, int second, double kernel);

    int first() const noexcept { return first_; }
    int second() const noexcept { return second_; }
    double kernel() const noexcept { return kernel_; }

private:
    int first_;
    int second_;
    double kernel_;
};

/// Argument outside the domain of a special function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Zero velocity where a direction is needed (2E <= 0).
class DegenerateVelocity : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the real range of an orbit (inside the turning point).
class OutsideDomain : public Error {
public:
    using Error::Error;
};

/// Operation requested for a geodesic regime that does not support it.
class WrongRegime : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace catenoid
