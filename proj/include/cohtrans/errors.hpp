#pragma once

#include <stdexcept>
#include <string>

namespace cohtrans {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NormError : Error {
    using Error::Error;
};

struct ZeroAmplitudeError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct MajorizationError : Error {
    using Error::Error;
};

/// Filtered SP enumeration produced no candidate set. Should be impossible
/// for majorizing pairs; surfaced for diagnostics rather than silently
/// swallowed.
struct NoCandidateError : Error {
    using Error::Error;
};

/// No enumerated SP admitted nonnegative probabilities. Carries every
/// attempted set and its failure reason so a tolerance problem can be told
/// apart from a genuine counterexample.
struct NoFeasibleSP : Error {
    using Error::Error;
};

struct DimensionTooLarge : Error {
    using Error::Error;
};

struct DegenerateGamma : Error {
    using Error::Error;
};

struct NegativeRadicand : Error {
    using Error::Error;
};

struct NoIntermediateFound : Error {
    using Error::Error;
};

struct BlockMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace cohtrans
