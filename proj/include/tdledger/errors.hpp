#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tdledger {

// Base class for every tdledger failure so the CLI boundary can map a single
// catch to an exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File-level failure of an input document. `where` pins the failure to a byte
// offset ("byte 42"), a line ("line 3"), or a JSON path ("/0/rule_id"),
// whichever fits the format.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::string where)
        : Error(where.empty() ? message : message + " (" + where + ")"),
          message_(message),
          where_(std::move(where)) {}

    const std::string& message() const noexcept { return message_; }
    const std::string& where() const noexcept { return where_; }

private:
    std::string message_;
    std::string where_;
};

// Bad arguments or configuration from the caller.
class UsageError : public Error {
public:
    using Error::Error;
};

// Domain invariant broken by otherwise well-formed data.
class ValidationError : public Error {
public:
    using Error::Error;
};

// One recoverable problem inside an otherwise parseable file. Collected by the
// parsers, never thrown.
struct RecordError {
    std::string where;
    std::string message;
};

}  // namespace tdledger
