#pragma once

#include <stdexcept>
#include <string>

namespace ksbox {

/// Base for every error raised by the library. The message always names the
/// violated precondition or invariant.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Marginal probability outside [0, 1/2].
class InvalidMarginal : public Error {
public:
    using Error::Error;
};

/// Dimension / cycle length / parity precondition failed.
class InvalidDimension : public Error {
public:
    using Error::Error;
};

/// Input index out of range, malformed table, or bad argument.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A matrix or state failed validation (hermiticity, trace, PSD, norm).
class InvalidState : public Error {
public:
    InvalidState(std::string invariant, const std::string& detail)
        : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

}  // namespace ksbox
