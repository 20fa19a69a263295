#pragma once

#include <stdexcept>
#include <string>

namespace ppifem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Point lies (within tolerance) on an interface; no unique subdomain.
struct AmbiguousPoint : Error {
    using Error::Error;
};

/// Geometry breaks hypothesis (H1) or (H2) on some element/edge.
struct HypothesisViolation : Error {
    using Error::Error;
};

/// A cut produced a sliver piece below the area threshold.
struct DegenerateCut : Error {
    using Error::Error;
};

struct DegeneratePolygon : Error {
    using Error::Error;
};

/// Local IFE condition system is rank deficient.
struct SingularLocalSystem : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct TriplePointOutside : Error {
    using Error::Error;
};

struct PointOutsideElement : Error {
    using Error::Error;
};

struct SolverBreakdown : Error {
    using Error::Error;
};

struct MissingExactSolution : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ppifem
