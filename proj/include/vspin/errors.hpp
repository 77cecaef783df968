#pragma once

#include <stdexcept>
#include <string>

namespace vspin {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : Error {
    using Error::Error;
};

struct PulseError : Error {
    using Error::Error;
};

struct EvolutionError : Error {
    using Error::Error;
};

struct StateError : Error {
    using Error::Error;
};

struct SignalError : Error {
    using Error::Error;
};

struct ReferenceError : Error {
    using Error::Error;
};

// Syntax/semantic failure in a pulse program or config file, with source location.
struct ParseError : Error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string &what_)
        : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
};

}  // namespace vspin
