// errors.hpp - exception hierarchy shared by all modules.

#pragma once

#include <stdexcept>
#include <string>

namespace chiralcav {

/// Base class. kind() is a stable machine-readable tag used in CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidParams : public Error {
public:
    InvalidParams(std::string field, std::string reason)
        : Error("InvalidParams", field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}
    const std::string& field() const noexcept { return field_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

class DegenerateDenominator : public Error {
public:
    explicit DegenerateDenominator(const std::string& what) : Error("DegenerateDenominator", what) {}
};

class SingularJacobian : public Error {
public:
    explicit SingularJacobian(const std::string& what) : Error("SingularJacobian", what) {}
};

class EmptySpecies : public Error {
public:
    explicit EmptySpecies(const std::string& what) : Error("EmptySpecies", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace chiralcav
