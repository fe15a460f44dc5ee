#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tactile {

// Base of every error the library throws. `kind()` is a stable snake_case tag
// used by the CLI for machine-readable error lines.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io_error", message) {}
};

// Malformed input file. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A statistic that is undefined for the given data (e.g. zero variance).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("domain_error", message) {}
};

}  // namespace tactile
