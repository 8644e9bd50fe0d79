#pragma once

#include <stdexcept>
#include <string>

namespace frrqr {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition (range, shape, domain).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input data could not be read or parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A pivoting loop did not settle within its pass budget.
class IterationLimitError : public Error {
public:
    using Error::Error;
};

}  // namespace frrqr
