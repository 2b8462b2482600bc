#pragma once

#include <stdexcept>
#include <string>

namespace stablenn {

/// Parameter outside the domain where a formula or law is defined.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A quadrature could not reach its requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration value; carries the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

namespace detail {

inline void require(bool ok, const char* message)
{
    if (!ok) throw DomainError(message);
}

inline void require(bool ok, const std::string& message)
{
    if (!ok) throw DomainError(message);
}

} // namespace detail
} // namespace stablenn
