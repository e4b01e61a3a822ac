#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace provcurate {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Syntax error in Turtle, N-Triples, SPARQL or delta text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Transport, HTTP or evaluation failure in a SPARQL backend.
class StoreError : public Error {
public:
    using Error::Error;
};

/// The requested mutation would not change anything.
class NoOpError : public Error {
public:
    using Error::Error;
};

} // namespace provcurate
