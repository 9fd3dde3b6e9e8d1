#pragma once

#include <stdexcept>
#include <string>

namespace fxpipe {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid format parameters (width, range).
class FormatError : public Error {
public:
    using Error::Error;
};

// A value fell outside a declared range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Malformed dataflow graph or illegal operand combination.
class GraphError : public Error {
public:
    using Error::Error;
};

class LutError : public Error {
public:
    using Error::Error;
};

class VhdlError : public Error {
public:
    using Error::Error;
};

} // namespace fxpipe
