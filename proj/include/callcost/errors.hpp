#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace callcost {

// Root of every error this library throws on purpose. Catching this at the
// top level is enough to map failures onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or option combinations supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Inputs that violate a mathematical precondition (tf < 1, df > d, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A file exists but its contents cannot be understood.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}
    explicit ParseError(const std::string& what) : Error(what) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

// The filesystem said no: missing paths, unreadable or unwritable files.
class IoError : public Error {
public:
    using Error::Error;
};

// The two forms of a kernel disagreed, so timings must not be trusted.
class EquivalenceError : public Error {
public:
    EquivalenceError(const std::string& what, double inline_checksum,
                     double call_checksum, double rel_diff)
        : Error(what),
          inline_checksum_(inline_checksum),
          call_checksum_(call_checksum),
          rel_diff_(rel_diff) {}

    double inline_checksum() const noexcept { return inline_checksum_; }
    double call_checksum() const noexcept { return call_checksum_; }
    double rel_diff() const noexcept { return rel_diff_; }

private:
    double inline_checksum_ = 0.0;
    double call_checksum_ = 0.0;
    double rel_diff_ = 0.0;
};

}  // namespace callcost
