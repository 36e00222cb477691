#ifndef AB_GEOMFIELDS_HPP
#define AB_GEOMFIELDS_HPP

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <variant>

#include "ab/quadrature.hpp"
#include "ab/vec3.hpp"

namespace ab {

// Ideal solenoid: uniform mu0*n*I field inside the cylinder, zero outside.
// length == infinity selects the infinite solenoid (closed-form A available).
struct SolenoidSpec {
    double radius = 0.0;          // m
    double length = std::numeric_limits<double>::infinity(); // m
    double turns_per_length = 0.0; // 1/m
    double current = 0.0;          // A
    Vec3 axis{0, 0, 1};            // unit
    Vec3 center{0, 0, 0};

    bool infinite() const { return std::isinf(length); }
    void validate() const;
};

// Rectangular-cross-section toroid, axis z through `center`, ideal
// azimuthally-uniform winding sheet.
struct ToroidSpec {
    double inner_radius = 0.0; // a, m
    double outer_radius = 0.0; // b, m
    double height = 0.0;       // h, m
    int turns = 0;             // N
    double current = 0.0;      // A
    Vec3 center{0, 0, 0};

    void validate() const;
};

// Idealized flux line along `axis` through `point`.
struct FluxLineSpec {
    double flux = 0.0; // Wb
    Vec3 point{0, 0, 0};
    Vec3 axis{0, 0, 1};

    void validate() const;
};

using SourceSpec = std::variant<SolenoidSpec, ToroidSpec, FluxLineSpec>;

void validate(const SourceSpec& spec);

// B1(r); exactly zero outside the confinement region.
Vec3 b_field(const SourceSpec& spec, const Vec3& r);

// Closed-form A for the infinite solenoid and the flux line (azimuthal gauge).
Vec3 a_field_analytic(const SourceSpec& spec, const Vec3& r);

// A1(r) = (1/4pi) \int B1(r') x (r - r') / |r - r'|^3 d^3r'
// for compact-support sources (finite solenoid, toroid).
struct VectorIntegralResult {
    Vec3 value;
    double error_estimate = 0.0;
};
VectorIntegralResult a_field_from_b(const SourceSpec& spec, const Vec3& r,
                                    const QuadConfig& cfg);

// Total confined flux of the source (through one winding of a linking loop).
double total_flux(const SourceSpec& spec);

// Signed flux through a closed loop: winding number times total flux.
double enclosed_flux(const SourceSpec& spec, const Path& loop);

// True if r lies strictly inside the source's field-carrying volume.
bool inside_source(const SourceSpec& spec, const Vec3& r);

// Compact-support region of B1 (throws UnsupportedGeometryError for the
// infinite solenoid and the flux line).
Region support_region(const SourceSpec& spec);

// Scalar gauge function chi: polynomial in (x,y,z) up to cubic order.
class GaugeFunction {
public:
    GaugeFunction() = default;

    // set coefficient of x^i y^j z^k (i+j+k <= 3)
    void set(int i, int j, int k, double c);
    double get(int i, int j, int k) const;

    double value(const Vec3& r) const;
    Vec3 gradient(const Vec3& r) const;

private:
    static int index(int i, int j, int k);
    std::array<double, 20> coeffs_{}; // monomials with total degree <= 3
};

using FieldFunction = std::function<Vec3(const Vec3&)>;

// A' = A + grad(chi); same curl, same closed-loop integrals.
FieldFunction apply_gauge(FieldFunction a, GaugeFunction chi);

} // namespace ab

#endif
