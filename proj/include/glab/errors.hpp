#pragma once

#include <stdexcept>
#include <string>

namespace glab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension arguments out of range or mismatched between operands.
struct InvalidDimension : Error {
    using Error::Error;
};

// A flag pair (u, L) whose direction does not lie in its subspace.
struct InconsistentFlag : Error {
    using Error::Error;
};

// Body/parameter combination outside the supported surface
// (e.g. polytope functionals above dimension 3).
struct Unsupported : Error {
    using Error::Error;
};

// A sample produced by a pushforward violates the target carrier invariants.
struct CarrierViolation : Error {
    using Error::Error;
};

// Reference side of a comparison vanishes on every probe while the other does not.
struct NoFit : Error {
    using Error::Error;
};

// Malformed input document (body spec or report file).
struct SchemaError : Error {
    using Error::Error;
};

}  // namespace glab
