#pragma once

#include <stdexcept>
#include <string>

namespace jdrisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed configuration, violated preconditions,
/// parameters outside a formula's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: quadrature did not converge, a linear
/// system was singular, a simulated state became non-finite.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double achieved = 0.0)
        : Error(what), achieved_(achieved) {}

    /// Achieved tolerance, residual or change norm at the point of failure.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

#define JDRISK_REQUIRE(cond, msg)                                  \
    do {                                                           \
        if (!(cond)) throw ::jdrisk::InvalidArgument(msg);         \
    } while (false)

}  // namespace jdrisk
