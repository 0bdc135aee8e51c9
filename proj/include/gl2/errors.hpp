#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gl2 {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModulusMismatch : public Error {
public:
    using Error::Error;
};

class NotInvertible : public Error {
public:
    using Error::Error;
};

class NonCoprimeModuli : public Error {
public:
    using Error::Error;
};

class NotADivisor : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    CapExceeded(const std::string& what, std::size_t partial)
        : Error(what), partial_(partial) {}
    std::size_t partial_count() const { return partial_; }

private:
    std::size_t partial_;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

// Raised when 12*genus does not come out as a nonnegative multiple of 12.
class IntegralityFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class PointNotOnCurve : public Error {
public:
    using Error::Error;
};

class SingularCurve : public Error {
public:
    using Error::Error;
};

class ZeroTwist : public Error {
public:
    using Error::Error;
};

class KernelNotOrder2 : public Error {
public:
    using Error::Error;
};

class BasisMismatch : public Error {
public:
    using Error::Error;
};

class BoundExceeded : public Error {
public:
    using Error::Error;
};

class MissingCurveData : public Error {
public:
    using Error::Error;
};

class UnknownPrime : public Error {
public:
    using Error::Error;
};

}  // namespace gl2
