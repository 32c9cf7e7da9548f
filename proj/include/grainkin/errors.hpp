#pragma once

#include <stdexcept>
#include <string>

namespace grainkin {

// Precondition violations use std::invalid_argument directly.

/// Time integration produced a non-finite or exploding sample.
class DivergedError : public std::runtime_error {
public:
    DivergedError(const std::string& what, double last_good_time)
        : std::runtime_error(what), last_good_time_(last_good_time) {}
    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

/// A quantity required by an operation is outside its admissible set
/// (e.g. nonpositive energy when forming a temperature).
class InvalidStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration text could not be turned into a valid experiment.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(what), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace grainkin
