#pragma once

#include <stdexcept>
#include <string>

namespace beliefbank {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; message carries file and line number.
struct ParseError : Error {
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

struct UnsatisfiableError : Error {
    using Error::Error;
};

}  // namespace beliefbank
