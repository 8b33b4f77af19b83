#pragma once

#include <stdexcept>
#include <string>

namespace catenoid_ac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a mathematical function (e.g. r <= 1 at the neck).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent arguments (sizes, empty inputs, out-of-range parameters).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A value object violates its invariant (unordered interfaces, non-dominant Gram matrix).
class StateError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// ODE integration failed at a specific time.
class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double failure_time)
        : NumericalError(what), failure_time_(failure_time) {}
    double failure_time() const noexcept { return failure_time_; }

private:
    double failure_time_;
};

/// The PDE solution left the envelope |v| <= 1.5.
class BlowUpError : public NumericalError {
public:
    BlowUpError(const std::string& what, double time) : NumericalError(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// The zero set of a field does not have the expected number of components.
class TopologyError : public Error {
public:
    TopologyError(const std::string& what, int found) : Error(what), found_(found) {}
    int crossings_found() const noexcept { return found_; }

private:
    int found_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace catenoid_ac
