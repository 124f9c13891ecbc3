#pragma once

#include <stdexcept>
#include <string>

namespace revlink {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user data: malformed files, out-of-range parameters, invalid types.
struct InvalidInput : Error {
    using Error::Error;
};
struct FormatError : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct TooFewSamples : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct LevelOutOfRange : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct PoleProximityError : Error {
    using Error::Error;
};

struct NonPositiveCurvature : Error {
    NonPositiveCurvature(double s_, double k_)
        : Error("non-positive curvature K=" + std::to_string(k_) + " at s=" + std::to_string(s_)),
          s(s_), k(k_) {}
    double s;
    double k;
};

struct MultipleCriticalPoints : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IntegrationError : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

struct Inconclusive : Error {
    using Error::Error;
};

struct DegeneracyError : Error {
    using Error::Error;
};

struct OracleError : Error {
    using Error::Error;
};

} // namespace revlink
