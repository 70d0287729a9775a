#pragma once

#include <stdexcept>
#include <string>

namespace avekit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

// Raised when a 2ⁿ loop would exceed the enumeration cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

// The instance has no solution, so there is nothing to select from.
class Unsolvable : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class GenerationFailed : public Error {
public:
    using Error::Error;
};

}  // namespace avekit
