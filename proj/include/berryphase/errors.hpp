#pragma once

#include <stdexcept>
#include <string>

namespace berry {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operator or basis dimension outside the supported range.
class InvalidDimension : public Error {
public:
    using Error::Error;
};

/// Mismatched operands (dimensions, bases, loop shapes).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input outside the domain of a formula (e.g. arg(beta) at beta = 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not reach the requested accuracy.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A state carries too much weight in the top band of the truncated basis.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double tail_mass)
        : Error(what + " (tail mass " + std::to_string(tail_mass) + ")"), tail_mass_(tail_mass) {}
    double tail_mass() const noexcept { return tail_mass_; }

private:
    double tail_mass_;
};

/// Loop sampling too coarse for the discrete overlap product.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Position grid does not cover the wavefunction.
class GridError : public Error {
public:
    using Error::Error;
};

/// Malformed user configuration; carries a line anchor when one is known.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace berry
