#pragma once

#include <stdexcept>
#include <string>

namespace relzkp {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mixing elements from fields of different widths.
struct FieldSpecMismatch : Error {
    using Error::Error;
};

// Multiplicative inverse of zero.
struct DivisionByZero : Error {
    using Error::Error;
};

// Malformed byte/hex encoding of a field element or spec.
struct EncodingError : Error {
    using Error::Error;
};

// Argument outside its documented domain.
struct InvalidParameter : Error {
    using Error::Error;
};

// Graph generation exhausted its restart budget.
struct GenerationFailed : Error {
    using Error::Error;
};

// Coloring is partial or uses values outside {0,1,2}.
struct InvalidColoring : Error {
    using Error::Error;
};

// Structurally invalid graph (self-loop, vertex out of range, no edges where required).
struct InvalidGraph : Error {
    using Error::Error;
};

// Zero query where a nonzero field element is required.
struct InvalidQuery : Error {
    using Error::Error;
};

// Challenge edge not present in the graph.
struct InvalidChallenge : Error {
    using Error::Error;
};

// A role received a message violating the protocol contract.
struct ProtocolViolation : Error {
    using Error::Error;
};

// Prover-side operation attempted without a witness.
struct NotAProver : Error {
    using Error::Error;
};

// Exact enumeration requested beyond the feasible instance size.
struct TooLargeToEnumerate : Error {
    using Error::Error;
};

// Distributions over different support universes.
struct DomainMismatch : Error {
    using Error::Error;
};

// Socket-level failure (connection loss, short read).
struct TransportError : Error {
    using Error::Error;
};

// Malformed or oversized wire frame.
struct FrameError : Error {
    using Error::Error;
};

// Inconsistent or incomplete run configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace relzkp
