#pragma once

#include <stdexcept>
#include <string>

namespace kc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct NegativeWeight : Error { using Error::Error; };
struct NotAJoint : Error { using Error::Error; };
struct SpaceMismatch : Error { using Error::Error; };
struct IllDefinedSuperposition : Error { using Error::Error; };
struct UnknownRole : Error { using Error::Error; };
struct InfeasibleFactorization : Error { using Error::Error; };
struct CaseMismatch : Error { using Error::Error; };
struct DecompositionUnavailable : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct NotADensity : Error { using Error::Error; };
struct SignatureMismatch : Error { using Error::Error; };

// Located parse failure for problem files. The location is a slash-separated
// field path, e.g. "corruption/tau/matrix".
struct ParseError : Error {
    ParseError(const std::string& where, const std::string& what)
        : Error(where + ": " + what), location(where) {}
    std::string location;
};

} // namespace kc
