#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace concord {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input errors: the caller handed us something outside the domain.

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnknownCase : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Computation errors: the input is well-formed but the requested quantity
// does not exist for it.

class UndefinedMeasure : public Error {
public:
    using Error::Error;
};

class DegenerateCell : public Error {
public:
    using Error::Error;
};

}  // namespace concord
