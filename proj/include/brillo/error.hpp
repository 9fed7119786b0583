#pragma once

#include <stdexcept>
#include <string>

namespace brillo {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Data-file problems: parse errors, unknown references, bad records.
class DataError : public Error {
public:
    using Error::Error;
};

// Bus misuse: unknown topic, duplicate subscription, handler failure.
class BusError : public Error {
public:
    using Error::Error;
};

}  // namespace brillo
