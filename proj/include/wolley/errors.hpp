#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wolley {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (support of zero, empty pattern, p == q).
struct DomainError : Error {
    using Error::Error;
};

// A term value or search would reach 2^63.
struct OverflowError : Error {
    using Error::Error;
};

// Allocation request beyond the configured memory budget.
struct ResourceError : Error {
    using Error::Error;
};

struct SieveTooSmall : Error {
    SieveTooSmall(unsigned long long value, unsigned long long limit)
        : Error("value " + std::to_string(value) + " exceeds sieve limit " + std::to_string(limit)),
          value(value), limit(limit) {}
    unsigned long long value;
    unsigned long long limit;
};

struct ConfigError : Error {
    using Error::Error;
};

struct CheckpointError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

struct FetchError : Error {
    using Error::Error;
};

struct VerificationFailure : Error {
    using Error::Error;
};

}  // namespace wolley
