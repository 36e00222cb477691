#ifndef AB_ERRORS_HPP
#define AB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Field evaluated on a singular locus (flux-line core, point-charge position).
struct SingularityError : Error {
    using Error::Error;
};

// Geometric precondition violated (path through a source, core on a grid node, ...).
struct GeometryError : Error {
    using Error::Error;
};

// Closed-form expression requested for a source kind that has none.
struct UnsupportedGeometryError : Error {
    using Error::Error;
};

// Adaptive quadrature hit its refinement cap before reaching the requested
// tolerance. Carries the best estimate so callers can still use it.
struct ConvergenceError : Error {
    double best_value;
    double error_estimate;
    ConvergenceError(const std::string& msg, double value, double err)
        : Error(msg), best_value(value), error_estimate(err) {}
};

// Wavepacket propagation diverged (norm growth beyond the unitarity budget).
struct StabilityError : Error {
    using Error::Error;
};

// Mismatched grid dimensions between field snapshots.
struct ShapeError : Error {
    using Error::Error;
};

// Interference profile has no dominant fringe harmonic.
struct NoFringeError : Error {
    using Error::Error;
};

// Bad user-supplied configuration; the message names the offending field.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace ab

#endif
