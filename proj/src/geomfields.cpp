#include "ab/geomfields.hpp"

#include <cmath>

#include "ab/constants.hpp"
#include "ab/errors.hpp"

namespace ab {

using constants::mu0;
using constants::pi;

namespace {

// Cylindrical decomposition of r about an axis line (point p0, unit dir u).
struct CylCoords {
    double rho;
    double z;
    Vec3 rho_hat; // undefined direction when rho == 0
    Vec3 phi_hat;
};

CylCoords cyl_about(const Vec3& p0, const Vec3& u, const Vec3& r) {
    const Vec3 d = r - p0;
    const double z = d.dot(u);
    const Vec3 rv = d - u * z;
    const double rho = rv.norm();
    CylCoords c{rho, z, {}, {}};
    if (rho > 0.0) {
        c.rho_hat = rv / rho;
        c.phi_hat = u.cross(c.rho_hat);
    }
    return c;
}

void check_unit(const Vec3& v, const char* field) {
    if (std::abs(v.norm() - 1.0) > 1e-12)
        throw ValidationError(std::string(field) + ": must be a unit vector");
}

// Signed winding number of a closed polyline about an axis line, from summed
// azimuthal increments of the projected vertices.
int axis_winding(const Path& loop, const Vec3& p0, const Vec3& u) {
    double total = 0.0;
    Vec3 prev;
    bool have_prev = false;
    for (const auto& v : loop.vertices) {
        const Vec3 d = v - p0;
        const Vec3 proj = d - u * d.dot(u);
        if (proj.norm() == 0.0)
            throw GeometryError("loop vertex on the source axis");
        if (have_prev) {
            const double cr = u.dot(prev.cross(proj));
            const double dt = prev.dot(proj);
            total += std::atan2(cr, dt);
        }
        prev = proj;
        have_prev = true;
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

// Winding of the loop's (rho, z) trace about the toroid cross-section center.
int poloidal_winding(const Path& loop, const ToroidSpec& t) {
    const double rho_c = 0.5 * (t.inner_radius + t.outer_radius);
    double total = 0.0;
    double px = 0.0, py = 0.0;
    bool have_prev = false;
    for (const auto& v : loop.vertices) {
        const Vec3 d = v - t.center;
        const double x = std::hypot(d.x, d.y) - rho_c;
        const double y = d.z;
        if (have_prev) total += std::atan2(px * y - py * x, px * x + py * y);
        px = x;
        py = y;
        have_prev = true;
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

} // namespace

void SolenoidSpec::validate() const {
    if (!(radius > 0.0)) throw ValidationError("solenoid.radius: must be > 0");
    if (!(turns_per_length > 0.0))
        throw ValidationError("solenoid.turns_per_length: must be > 0");
    if (!infinite() && !(length > 0.0))
        throw ValidationError("solenoid.length: must be > 0 or infinite");
    if (!std::isfinite(current)) throw ValidationError("solenoid.current: not finite");
    check_unit(axis, "solenoid.axis");
    if (!center.finite()) throw ValidationError("solenoid.center: not finite");
}

void ToroidSpec::validate() const {
    if (!(inner_radius > 0.0))
        throw ValidationError("toroid.inner_radius: must be > 0");
    if (!(outer_radius > inner_radius))
        throw ValidationError("toroid.outer_radius: must exceed inner_radius");
    if (!(height > 0.0)) throw ValidationError("toroid.height: must be > 0");
    if (turns < 1) throw ValidationError("toroid.turns: must be >= 1");
    if (!std::isfinite(current)) throw ValidationError("toroid.current: not finite");
}

void FluxLineSpec::validate() const {
    if (!std::isfinite(flux)) throw ValidationError("flux_line.flux: not finite");
    check_unit(axis, "flux_line.axis");
    if (!point.finite()) throw ValidationError("flux_line.point: not finite");
}

void validate(const SourceSpec& spec) {
    std::visit([](const auto& s) { s.validate(); }, spec);
}

Vec3 b_field(const SourceSpec& spec, const Vec3& r) {
    if (const auto* s = std::get_if<SolenoidSpec>(&spec)) {
        const CylCoords c = cyl_about(s->center, s->axis, r);
        const bool inside = c.rho < s->radius &&
                            (s->infinite() || std::abs(c.z) < 0.5 * s->length);
        return inside ? s->axis * (mu0 * s->turns_per_length * s->current)
                      : Vec3{};
    }
    if (const auto* t = std::get_if<ToroidSpec>(&spec)) {
        const Vec3 d = r - t->center;
        const double rho = std::hypot(d.x, d.y);
        if (rho > t->inner_radius && rho < t->outer_radius &&
            std::abs(d.z) < 0.5 * t->height) {
            const Vec3 phi_hat = Vec3{-d.y / rho, d.x / rho, 0.0};
            return phi_hat * (mu0 * t->turns * t->current / (2.0 * pi * rho));
        }
        return {};
    }
    const auto& fl = std::get<FluxLineSpec>(spec);
    const CylCoords c = cyl_about(fl.point, fl.axis, r);
    if (c.rho == 0.0)
        throw SingularityError("b_field evaluated on the flux-line core");
    return {};
}

Vec3 a_field_analytic(const SourceSpec& spec, const Vec3& r) {
    if (const auto* s = std::get_if<SolenoidSpec>(&spec)) {
        if (!s->infinite())
            throw UnsupportedGeometryError(
                "no closed-form A for the finite solenoid; use a_field_from_b");
        const CylCoords c = cyl_about(s->center, s->axis, r);
        const double b0 = mu0 * s->turns_per_length * s->current;
        if (c.rho == 0.0) return {};
        const double a_phi = c.rho <= s->radius
                                 ? 0.5 * b0 * c.rho
                                 : 0.5 * b0 * s->radius * s->radius / c.rho;
        return c.phi_hat * a_phi;
    }
    if (const auto* fl = std::get_if<FluxLineSpec>(&spec)) {
        const CylCoords c = cyl_about(fl->point, fl->axis, r);
        if (fl->flux == 0.0) return {};
        if (c.rho == 0.0)
            throw SingularityError("a_field_analytic on the flux-line core");
        return c.phi_hat * (fl->flux / (2.0 * pi * c.rho));
    }
    throw UnsupportedGeometryError(
        "no closed-form A for the toroid; use a_field_from_b");
}

bool inside_source(const SourceSpec& spec, const Vec3& r) {
    if (const auto* s = std::get_if<SolenoidSpec>(&spec)) {
        const CylCoords c = cyl_about(s->center, s->axis, r);
        return c.rho < s->radius &&
               (s->infinite() || std::abs(c.z) < 0.5 * s->length);
    }
    if (const auto* t = std::get_if<ToroidSpec>(&spec)) {
        const Vec3 d = r - t->center;
        const double rho = std::hypot(d.x, d.y);
        return rho > t->inner_radius && rho < t->outer_radius &&
               std::abs(d.z) < 0.5 * t->height;
    }
    const auto& fl = std::get<FluxLineSpec>(spec);
    return cyl_about(fl.point, fl.axis, r).rho == 0.0;
}

Region support_region(const SourceSpec& spec) {
    if (const auto* s = std::get_if<SolenoidSpec>(&spec)) {
        if (s->infinite())
            throw UnsupportedGeometryError(
                "infinite solenoid has non-compact field support");
        return CylinderRegion{s->center, s->axis, s->radius, s->length};
    }
    if (const auto* t = std::get_if<ToroidSpec>(&spec))
        return TorusRegion{t->center, t->inner_radius, t->outer_radius,
                           t->height};
    throw UnsupportedGeometryError("flux line has singular field support");
}

VectorIntegralResult a_field_from_b(const SourceSpec& spec, const Vec3& r,
                                    const QuadConfig& cfg) {
    const Region support = support_region(spec);
    if (inside_source(spec, r))
        throw GeometryError("a_field_from_b requires r outside the source");

    QuadConfig comp_cfg = cfg;
    comp_cfg.accept_best_on_cap = true; // combined convergence check below

    Vec3 a;
    double err = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        auto f = [&](const Vec3& rp) {
            const Vec3 d = r - rp;
            const double d3 = std::pow(d.norm2(), 1.5);
            const Vec3 k = b_field(spec, rp).cross(d) / (4.0 * pi * d3);
            return comp == 0 ? k.x : (comp == 1 ? k.y : k.z);
        };
        const IntegralResult res = volume_integral(f, support, comp_cfg);
        if (comp == 0) a.x = res.value;
        else if (comp == 1) a.y = res.value;
        else a.z = res.value;
        err += res.error_estimate;
    }
    if (err > cfg.rel_tol * a.norm() + 10.0 * cfg.abs_tol &&
        !cfg.accept_best_on_cap)
        throw ConvergenceError("a_field_from_b quadrature did not converge",
                               a.norm(), err);
    return {a, err};
}

double total_flux(const SourceSpec& spec) {
    if (const auto* s = std::get_if<SolenoidSpec>(&spec))
        return mu0 * s->turns_per_length * s->current * pi * s->radius *
               s->radius;
    if (const auto* t = std::get_if<ToroidSpec>(&spec))
        return mu0 * t->turns * t->current * t->height *
               std::log(t->outer_radius / t->inner_radius) / (2.0 * pi);
    return std::get<FluxLineSpec>(spec).flux;
}

double enclosed_flux(const SourceSpec& spec, const Path& loop) {
    loop.validate();
    if (!loop.closed) throw GeometryError("enclosed_flux needs a closed loop");
    // the loop must stay clear of the field-carrying volume
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        const Vec3 a = loop.vertices[i];
        const Vec3 b = loop.vertices[i + 1];
        for (int k = 0; k <= 16; ++k) {
            const Vec3 p = a + (b - a) * (static_cast<double>(k) / 16.0);
            if (inside_source(spec, p))
                throw GeometryError("loop intersects the source volume");
        }
    }
    int w = 0;
    if (const auto* s = std::get_if<SolenoidSpec>(&spec))
        w = axis_winding(loop, s->center, s->axis);
    else if (const auto* t = std::get_if<ToroidSpec>(&spec))
        w = poloidal_winding(loop, *t);
    else {
        const auto& fl = std::get<FluxLineSpec>(spec);
        w = axis_winding(loop, fl.point, fl.axis);
    }
    return w * total_flux(spec);
}

int GaugeFunction::index(int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i + j + k > 3)
        throw ValidationError("gauge monomial degree out of range");
    int idx = 0;
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3 - a; ++b)
            for (int c = 0; c <= 3 - a - b; ++c) {
                if (a == i && b == j && c == k) return idx;
                ++idx;
            }
    return -1; // unreachable
}

void GaugeFunction::set(int i, int j, int k, double c) {
    if (!std::isfinite(c)) throw ValidationError("gauge coefficient not finite");
    coeffs_[index(i, j, k)] = c;
}

double GaugeFunction::get(int i, int j, int k) const {
    return coeffs_[index(i, j, k)];
}

double GaugeFunction::value(const Vec3& r) const {
    double v = 0.0;
    int idx = 0;
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3 - a; ++b)
            for (int c = 0; c <= 3 - a - b; ++c, ++idx) {
                const double m = coeffs_[idx];
                if (m != 0.0)
                    v += m * std::pow(r.x, a) * std::pow(r.y, b) *
                         std::pow(r.z, c);
            }
    return v;
}

Vec3 GaugeFunction::gradient(const Vec3& r) const {
    Vec3 g;
    int idx = 0;
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3 - a; ++b)
            for (int c = 0; c <= 3 - a - b; ++c, ++idx) {
                const double m = coeffs_[idx];
                if (m == 0.0) continue;
                if (a > 0)
                    g.x += m * a * std::pow(r.x, a - 1) * std::pow(r.y, b) *
                           std::pow(r.z, c);
                if (b > 0)
                    g.y += m * b * std::pow(r.x, a) * std::pow(r.y, b - 1) *
                           std::pow(r.z, c);
                if (c > 0)
                    g.z += m * c * std::pow(r.x, a) * std::pow(r.y, b) *
                           std::pow(r.z, c - 1);
            }
    return g;
}

FieldFunction apply_gauge(FieldFunction a, GaugeFunction chi) {
    return [a = std::move(a), chi = std::move(chi)](const Vec3& r) {
        return a(r) + chi.gradient(r);
    };
}

} // namespace ab
