#pragma once

#include <stdexcept>
#include <string>

namespace dkaf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mismatched vector or matrix dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Samples that cannot support a statistic (too few, zero spread).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

// Operation invalid for the current object state (empty dictionary, bad index).
class StateError : public Error {
public:
    using Error::Error;
};

// Network could not be built as requested.
class ConstructionError : public Error {
public:
    using Error::Error;
};

// Invalid configuration. `key()` names the offending dotted key when known.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace dkaf
