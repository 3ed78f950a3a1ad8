#pragma once

#include <stdexcept>
#include <string>

namespace qprob {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimMismatch : Error {
    using Error::Error;
};
struct NonSquare : Error {
    using Error::Error;
};
struct NotHermitian : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct NotUnitary : Error {
    using Error::Error;
};
struct BadWeights : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};
struct NotOrthogonal : Error {
    using Error::Error;
};
struct TooLong : Error {
    using Error::Error;
};
struct BadOrder : Error {
    using Error::Error;
};
struct NoStateUnsupported : Error {
    using Error::Error;
};
struct ZeroConditioningEvent : Error {
    using Error::Error;
};
struct NotEntangled : Error {
    using Error::Error;
};
struct NonIncreasingTimes : Error {
    using Error::Error;
};
struct MonotonicityViolated : Error {
    using Error::Error;
};
struct NonUnitaryEvolution : Error {
    using Error::Error;
};
struct UnknownName : Error {
    using Error::Error;
};
struct SyntaxError : Error {
    using Error::Error;
};

} // namespace qprob
