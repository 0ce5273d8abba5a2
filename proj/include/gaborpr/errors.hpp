#pragma once

#include <stdexcept>
#include <string>

namespace gaborpr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition, postcondition, or hypothesis: dimension mismatches,
// unmet check hypotheses, ambiguous zero matches, boundary zeros, inconsistent
// winding counts, proportional counterexample inputs.
struct ContractViolation : Error {
    using Error::Error;
};

// Raised instead of returning inf/nan when an intermediate exponent would
// exceed the configured magnitude (default 700 in natural-log units).
struct OverflowGuard : Error {
    double exponent;
    OverflowGuard(const std::string& what, double exponent_)
        : Error(what), exponent(exponent_) {}
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

// Malformed input files or parameter strings.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace gaborpr
