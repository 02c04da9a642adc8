#pragma once

#include <stdexcept>

namespace jsr2 {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |det Q| fell below the scale-aware singularity threshold.
class SingularTransform : public Error {
public:
    using Error::Error;
};

// Operation requires the proportional off-diagonal pattern with bc > 0.
class PatternViolation : public Error {
public:
    using Error::Error;
};

// Pivot member does not have two distinct real eigenvalues.
class NotDiagonalizable : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

// Family file rejected; the message names the offending field or byte position.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace jsr2
