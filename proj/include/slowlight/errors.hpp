// errors.hpp - exception types shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

/// Thrown when a group velocity is requested at Omega = 0 with no decay floor.
class StoppedLight : public std::domain_error {
public:
    StoppedLight() : std::domain_error("stopped light: group velocity is zero at Omega = 0") {}
};

/// Non-finite values or other failures of a numerical solver.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration document errors; `key()` names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& reason)
        : std::runtime_error(key.empty() ? reason : key + ": " + reason), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A storage run refused because the feasibility report has a failing check.
class FeasibilityRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace slowlight
