#pragma once

#include <stdexcept>
#include <string>

namespace randla {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct ZeroMatrix : Error {
    using Error::Error;
};
struct PivotBreakdown : Error {
    using Error::Error;
};
struct LengthNotPowerOfTwo : Error {
    using Error::Error;
};
struct ProfileNotSorted : Error {
    using Error::Error;
};
struct ConstructionFailed : Error {
    using Error::Error;
};
struct Degenerate : Error {
    using Error::Error;
};
struct RankTooLarge : Error {
    using Error::Error;
};
struct RankDeficientSketch : Error {
    using Error::Error;
};
struct TooLarge : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

} // namespace randla
