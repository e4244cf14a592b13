#pragma once

#include <stdexcept>
#include <string>

namespace trv {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad caller input: malformed JSON, invalid order string, precondition breach.
struct InvalidInput : Error {
    using Error::Error;
};

// Two projections coincide within tolerance; the order is undefined for that direction.
struct TieError : Error {
    using Error::Error;
};

// A line claimed to be a transversal misses some ball.
struct NotATransversal : Error {
    using Error::Error;
};

// A transversal realizes a different order than required.
struct WrongOrder : Error {
    using Error::Error;
};

// Depth machinery requires congruent radii.
struct MixedRadii : Error {
    using Error::Error;
};

// Ridge/screen operations require the line tangent to the ball.
struct NotTangent : Error {
    using Error::Error;
};

// Hyperboloidal parameterization hit a vanishing denominator.
struct DegenerateParameter : Error {
    using Error::Error;
};

// The R^4 line chart cannot represent a line parallel to z = const planes.
struct DegenerateChart : Error {
    using Error::Error;
};

// shrink_to_pin could not certify the starting transversal.
struct NoInitialTransversal : Error {
    using Error::Error;
};

// two_stage_shrink: one of the two required transversals is absent.
struct Infeasible : Error {
    using Error::Error;
};

// Special-function argument outside its stated domain.
struct DomainError : Error {
    using Error::Error;
};

// Two-cylinder packing requires pi/4 < theta <= pi/2.
struct BadAngle : Error {
    using Error::Error;
};

// Internal numerical failure (maps to CLI exit code 2).
struct NumericFailure : Error {
    using Error::Error;
};

} // namespace trv
