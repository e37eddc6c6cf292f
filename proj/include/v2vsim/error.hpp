// v2vsim/error.hpp - error types thrown by the library
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace v2vsim {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input document (XML, CSV, key-value). Carries the 1-based source
// line when known; line 0 means "not tied to a specific line".
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg), line(0) {}
    ParseError(const std::string& msg, std::size_t line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};

// Invalid configuration value (non-positive step, bad threshold order, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Invalid runtime input (non-finite force, negative speed, ...).
struct InputError : Error {
    using Error::Error;
};

// Unknown vehicle id or snapshot time.
struct LookupError : Error {
    using Error::Error;
};

// Inputs that are individually valid but disagree with each other,
// e.g. a forest vertex missing from the snapshot it is exported with.
struct ConsistencyError : Error {
    using Error::Error;
};

// File open / read / write failure. Message names the path.
struct IoError : Error {
    using Error::Error;
};

}  // namespace v2vsim
