#ifndef AB_QUADRATURE_HPP
#define AB_QUADRATURE_HPP

#include <functional>
#include <variant>
#include <vector>

#include "ab/errors.hpp"
#include "ab/vec3.hpp"

namespace ab {

// Spatial polyline. Closed paths must have coincident endpoints (<= 1e-12 m).
struct Path {
    std::vector<Vec3> vertices;
    bool closed = false;

    void validate() const; // throws GeometryError on bad topology
    double length() const;
    Path reversed() const;

    // Regular polygonal approximation of a circle around `center`, in the plane
    // normal to `axis`, starting at angle0. n_segments chords, closed.
    static Path circle(const Vec3& center, const Vec3& axis, double radius,
                       int n_segments, double angle0 = 0.0);
    // Open circular arc from angle0 to angle1 (radians, right-handed about axis).
    static Path arc(const Vec3& center, const Vec3& axis, double radius,
                    double angle0, double angle1, int n_segments);
};

struct CylinderRegion {
    Vec3 center;      // midpoint of the axis
    Vec3 axis;        // unit vector
    double radius = 0.0;
    double length = 0.0;
};

struct TorusRegion {
    // Rectangular cross-section body of revolution about the z axis through `center`.
    Vec3 center;
    double inner_radius = 0.0; // a
    double outer_radius = 0.0; // b
    double height = 0.0;       // h
};

struct BoxRegion {
    Vec3 lo;
    Vec3 hi;
};

using Region = std::variant<CylinderRegion, TorusRegion, BoxRegion>;

double region_measure(const Region& region);
bool region_contains(const Region& region, const Vec3& r);

struct QuadConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-14;
    int max_depth = 20;
    // Accept the best estimate instead of throwing when refinement caps out.
    bool accept_best_on_cap = false;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod 7/15 on [a,b].
IntegralResult integrate_1d(const std::function<double(double)>& f, double a,
                            double b, const QuadConfig& cfg);

// \int F . dl over a polyline, per-segment adaptive.
IntegralResult line_integral(const std::function<Vec3(const Vec3&)>& field,
                             const Path& path, const QuadConfig& cfg);

// \int f d^3r over a region, integrated in the region's natural coordinates.
IntegralResult volume_integral(const std::function<double(const Vec3&)>& f,
                               const Region& region, const QuadConfig& cfg);

} // namespace ab

#endif
