#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace wigdev {

// Compact %g rendering of a number for error messages.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sample counts or grids that do not line up.
struct DimensionError : Error {
    using Error::Error;
};

// Argument outside the domain of an operation (n = 0, empty mixture, ...).
struct DomainError : Error {
    using Error::Error;
};

// Grid too coarse (or too narrow) for the requested object.
struct ResolutionError : Error {
    using Error::Error;
};

// Linear system at (or numerically near) a resonance.
struct NearResonanceError : Error {
    NearResonanceError(const std::string& what, double cond)
        : Error(what), condition_number(cond) {}
    double condition_number;
};

// Potential window does not cover the span the nonlocal kernel needs.
struct NonlocalityError : Error {
    NonlocalityError(const std::string& what, double lo, double hi)
        : Error(what), required_min(lo), required_max(hi) {}
    double required_min;
    double required_max;
};

// Profile construction could not proceed.
struct DegenerateProfileError : Error {
    using Error::Error;
};

struct ConstructionFailedError : Error {
    using Error::Error;
};

// Harmonic profile data that does not cover a full period.
struct ReconstructionIncompleteError : Error {
    using Error::Error;
};

// Positivity witness needs overlap mass between the two supports.
struct WitnessUnavailableError : Error {
    using Error::Error;
};

// Truncation order hit the basis limit before the tail fell below eps.
struct InsufficientBasisError : Error {
    InsufficientBasisError(const std::string& what, double tail)
        : Error(what), achieved_tail(tail) {}
    double achieved_tail;
};

}  // namespace wigdev
