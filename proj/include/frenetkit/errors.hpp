#pragma once

#include <stdexcept>
#include <string>

namespace frenetkit {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Orthonormalization ran out of rank. `index` is the 1-based position of the
/// first input vector whose residual fell below the rank tolerance.
struct RankDeficiency : Error {
    RankDeficiency(int index_, const std::string& what_)
        : Error(what_), index(index_) {}
    int index;
};

/// Point lies farther from the affine hull than the allowed tolerance.
struct OffAffineHull : Error {
    OffAffineHull(double distance_, const std::string& what_)
        : Error(what_), distance(distance_) {}
    double distance;
};

struct NotInSimplex : Error {
    using Error::Error;
};

struct DegenerateSimplex : Error {
    using Error::Error;
};

/// Flag construction inside a simplex found no room to advance at `level`.
struct NoPositiveStep : Error {
    NoPositiveStep(int level_, const std::string& what_)
        : Error(what_), level(level_) {}
    int level;
};

}  // namespace frenetkit
