#pragma once

#include <stdexcept>
#include <string>

namespace enetfp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed, missing or inconsistent data.
class DataError : public Error {
public:
    using Error::Error;
};

// Unknown feature id.
class LookupError : public Error {
public:
    using Error::Error;
};

// Input point outside a dictionary's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// The truncation set is infinite: weights do not grow and no level cap is set.
class UnboundedActiveSetError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// A bound constant C could not be resolved (neither an override nor A given).
class MissingConstantError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// An iterative procedure ran out of budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace enetfp
