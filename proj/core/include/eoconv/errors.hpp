#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eoconv {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A mode was configured with a total linewidth <= 0.
struct NonPositiveLinewidth : Error {
    using Error::Error;
};

// Alias kept separate for call sites that specifically guard a division.
struct ZeroLinewidth : NonPositiveLinewidth {
    using NonPositiveLinewidth::NonPositiveLinewidth;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Iterative solver or fitter exhausted its iteration budget.
struct NoConvergence : Error {
    NoConvergence(std::string what, int iterations_, double residual_)
        : Error(std::move(what)), iterations(iterations_), residual(residual_) {}
    int iterations = 0;
    double residual = 0.0; // last relative residual
};

// Field profiles sampled on incompatible grids.
struct GridMismatch : Error {
    using Error::Error;
};

// A field profile with vanishing (or negative) normalization volume.
struct ZeroNormVolume : Error {
    using Error::Error;
};

// Root bracket does not contain a sign change.
struct NoRootInBracket : Error {
    using Error::Error;
};

// Two bare modes with (nearly) equal thermal slopes: branches are not
// distinguishable asymptotically and no crossing temperature exists.
struct DegenerateSlopes : Error {
    using Error::Error;
};

// Temperature search target met identically across the whole bracket.
struct DegenerateTarget : Error {
    using Error::Error;
};

// Fit problem without enough signal to constrain its parameters.
struct IllConditioned : Error {
    using Error::Error;
};

// Malformed text input (scenario, trace, or profile file).  The offending
// line is part of the message so it reaches the user verbatim.
struct ParseError : Error {
    ParseError(std::string what, std::size_t line_)
        : Error(line_ > 0 ? std::move(what) + " (line " + std::to_string(line_) + ")"
                          : std::move(what)),
          line(line_) {}
    std::size_t line = 0; // 1-based line number in the offending file
};

// File could not be opened or written.
struct IoError : Error {
    using Error::Error;
};

} // namespace eoconv
