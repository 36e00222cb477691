#include "ab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "ab/constants.hpp"

namespace ab {

namespace {

// Gauss-Kronrod 7/15 pair on [-1, 1].
constexpr int kGk = 8; // nodes on the non-negative half axis
constexpr double gk_nodes[kGk] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double gk_wk[kGk] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss-7 weights for nodes 1, 3, 5, 7 of the Kronrod set.
constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Segment {
    double a, b;
    double value;
    double error;
    int depth;
};

Segment gk15(const std::function<double(double)>& f, double a, double b,
             int depth) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < kGk; ++i) {
        double fv;
        if (i == kGk - 1) {
            fv = f(mid);
            kron += gk_wk[i] * fv;
            gauss += gk_wg[3] * fv;
        } else {
            const double dx = half * gk_nodes[i];
            const double f1 = f(mid - dx);
            const double f2 = f(mid + dx);
            kron += gk_wk[i] * (f1 + f2);
            if (i % 2 == 1) gauss += gk_wg[i / 2] * (f1 + f2);
        }
    }
    kron *= half;
    gauss *= half;
    return {a, b, kron, std::abs(kron - gauss), depth};
}

constexpr std::size_t kMaxSegments = 40000;

IntegralResult adapt(const std::function<double(double)>& f,
                     std::vector<Segment> segs, const QuadConfig& cfg) {
    auto totals = [&segs] {
        double v = 0.0, e = 0.0;
        for (const auto& s : segs) {
            v += s.value;
            e += s.error;
        }
        return std::pair{v, e};
    };
    while (true) {
        auto [value, error] = totals();
        const double goal = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
        if (error <= goal) return {value, error, true};
        // worst-error-first, leftmost on ties, skipping capped segments
        std::size_t worst = segs.size();
        double refinable = 0.0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].depth >= cfg.max_depth) continue;
            refinable += segs[i].error;
            if (worst == segs.size() || segs[i].error > segs[worst].error ||
                (segs[i].error == segs[worst].error && segs[i].a < segs[worst].a))
                worst = i;
        }
        // Give up once depth-capped segments dominate: further splits of the
        // smooth remainder cannot close the gap to the goal.
        const double capped = error - refinable;
        if (capped > goal && refinable <= 0.1 * capped) worst = segs.size();
        if (worst == segs.size() || segs.size() >= kMaxSegments) {
            if (cfg.accept_best_on_cap) return {value, error, false};
            throw ConvergenceError("quadrature failed to reach tolerance", value,
                                   error);
        }
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        segs[worst] = gk15(f, s.a, mid, s.depth + 1);
        segs.push_back(gk15(f, mid, s.b, s.depth + 1));
    }
}

// Deterministic orthonormal frame completing a unit axis.
void frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
    const Vec3 trial = std::abs(axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    e1 = (trial - axis * trial.dot(axis)).normalized();
    e2 = axis.cross(e1);
}

// Nested 1D integration over three coordinates with Jacobian.
// map(c0, c1, c2) -> (point, jacobian)
struct NestedIntegrand {
    const std::function<double(const Vec3&)>* f;
    std::function<void(double, double, double, Vec3&, double&)> map;
    double lo0, hi0, lo1, hi1, lo2, hi2; // 2 outermost, 0 innermost
};

IntegralResult nested_volume(const NestedIntegrand& n, const QuadConfig& cfg) {
    QuadConfig inner = cfg;
    inner.rel_tol = std::max(cfg.rel_tol * 0.1, 1e-13);
    inner.accept_best_on_cap = true;
    inner.max_depth = std::max(4, cfg.max_depth - 6);

    bool inner_ok = true;
    double worst_inner_abs = 0.0; // integrand error of the mid integral
    double worst_mid_abs = 0.0;   // integrand error of the outer integral

    auto outer_f = [&](double c2) {
        auto mid_f = [&](double c1) {
            auto inner_f = [&](double c0) {
                Vec3 p;
                double jac;
                n.map(c0, c1, c2, p, jac);
                return (*n.f)(p) * jac;
            };
            IntegralResult r = integrate_1d(inner_f, n.lo0, n.hi0, inner);
            if (!r.converged) inner_ok = false;
            worst_inner_abs = std::max(worst_inner_abs, r.error_estimate);
            return r.value;
        };
        IntegralResult r = integrate_1d(mid_f, n.lo1, n.hi1, inner);
        if (!r.converged) inner_ok = false;
        worst_mid_abs = std::max(worst_mid_abs, r.error_estimate);
        return r.value;
    };
    IntegralResult out = integrate_1d(outer_f, n.lo2, n.hi2, cfg);
    // inner-dimension errors propagate as integrand perturbations
    const double range1 = std::abs(n.hi1 - n.lo1);
    const double range2 = std::abs(n.hi2 - n.lo2);
    out.error_estimate +=
        (worst_mid_abs + worst_inner_abs * range1) * range2;
    out.converged = out.converged && inner_ok &&
                    out.error_estimate <=
                        std::max(10.0 * cfg.abs_tol,
                                 10.0 * cfg.rel_tol * std::abs(out.value));
    if (!out.converged && !cfg.accept_best_on_cap)
        throw ConvergenceError("volume quadrature failed to reach tolerance",
                               out.value, out.error_estimate);
    return out;
}

} // namespace

void Path::validate() const {
    if (vertices.size() < 2) throw GeometryError("path needs at least 2 vertices");
    for (std::size_t i = 1; i < vertices.size(); ++i)
        if ((vertices[i] - vertices[i - 1]).norm() == 0.0)
            throw GeometryError("path has coincident consecutive vertices");
    if (closed && (vertices.front() - vertices.back()).norm() > 1e-12)
        throw GeometryError("closed path endpoints do not coincide");
    for (const auto& v : vertices)
        if (!v.finite()) throw GeometryError("path vertex not finite");
}

double Path::length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        s += (vertices[i] - vertices[i - 1]).norm();
    return s;
}

Path Path::reversed() const {
    Path p;
    p.vertices.assign(vertices.rbegin(), vertices.rend());
    p.closed = closed;
    return p;
}

Path Path::circle(const Vec3& center, const Vec3& axis, double radius,
                  int n_segments, double angle0) {
    Path p = arc(center, axis, radius, angle0,
                 angle0 + 2.0 * constants::pi, n_segments);
    p.vertices.back() = p.vertices.front(); // close exactly
    p.closed = true;
    return p;
}

Path Path::arc(const Vec3& center, const Vec3& axis, double radius,
               double angle0, double angle1, int n_segments) {
    Vec3 e1, e2;
    frame(axis.normalized(), e1, e2);
    Path p;
    p.vertices.reserve(n_segments + 1);
    for (int i = 0; i <= n_segments; ++i) {
        const double t = angle0 + (angle1 - angle0) * i / n_segments;
        p.vertices.push_back(center + e1 * (radius * std::cos(t)) +
                             e2 * (radius * std::sin(t)));
    }
    p.closed = false;
    return p;
}

double region_measure(const Region& region) {
    using constants::pi;
    if (const auto* c = std::get_if<CylinderRegion>(&region))
        return pi * c->radius * c->radius * c->length;
    if (const auto* t = std::get_if<TorusRegion>(&region))
        return pi * (t->outer_radius * t->outer_radius -
                     t->inner_radius * t->inner_radius) *
               t->height;
    const auto& b = std::get<BoxRegion>(region);
    return (b.hi.x - b.lo.x) * (b.hi.y - b.lo.y) * (b.hi.z - b.lo.z);
}

bool region_contains(const Region& region, const Vec3& r) {
    if (const auto* c = std::get_if<CylinderRegion>(&region)) {
        const Vec3 d = r - c->center;
        const double z = d.dot(c->axis);
        if (std::abs(z) > 0.5 * c->length) return false;
        return (d - c->axis * z).norm() <= c->radius;
    }
    if (const auto* t = std::get_if<TorusRegion>(&region)) {
        const Vec3 d = r - t->center;
        if (std::abs(d.z) > 0.5 * t->height) return false;
        const double rho = std::hypot(d.x, d.y);
        return rho >= t->inner_radius && rho <= t->outer_radius;
    }
    const auto& b = std::get<BoxRegion>(region);
    return r.x >= b.lo.x && r.x <= b.hi.x && r.y >= b.lo.y && r.y <= b.hi.y &&
           r.z >= b.lo.z && r.z <= b.hi.z;
}

IntegralResult integrate_1d(const std::function<double(double)>& f, double a,
                            double b, const QuadConfig& cfg) {
    if (a == b) return {0.0, 0.0, true};
    // Seed with several panels so narrow interior features cannot slip
    // through the first embedded-rule estimate.
    constexpr int kSeed = 8;
    std::vector<Segment> segs;
    segs.reserve(kSeed);
    for (int i = 0; i < kSeed; ++i)
        segs.push_back(gk15(f, a + (b - a) * i / kSeed,
                            a + (b - a) * (i + 1) / kSeed, 0));
    return adapt(f, std::move(segs), cfg);
}

IntegralResult line_integral(const std::function<Vec3(const Vec3&)>& field,
                             const Path& path, const QuadConfig& cfg) {
    path.validate();
    const auto& v = path.vertices;
    // One parameter interval per polyline segment so kinks never sit inside
    // a Gauss panel.
    auto f = [&](double s) {
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(s),
                                             v.size() - 2);
        const double t = s - static_cast<double>(i);
        const Vec3 d = v[i + 1] - v[i];
        return field(v[i] + d * t).dot(d);
    };
    std::vector<Segment> segs;
    segs.reserve(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        segs.push_back(gk15(f, static_cast<double>(i), static_cast<double>(i + 1), 0));
    return adapt(f, std::move(segs), cfg);
}

IntegralResult volume_integral(const std::function<double(const Vec3&)>& f,
                               const Region& region, const QuadConfig& cfg) {
    using constants::pi;
    NestedIntegrand n;
    n.f = &f;
    if (const auto* c = std::get_if<CylinderRegion>(&region)) {
        Vec3 e1, e2;
        frame(c->axis.normalized(), e1, e2);
        const Vec3 center = c->center;
        const Vec3 axis = c->axis.normalized();
        // innermost rho, then phi, outermost z (long axis gets the top-level
        // refinement budget)
        n.map = [center, axis, e1, e2](double rho, double phi, double z, Vec3& p,
                                       double& jac) {
            p = center + axis * z + e1 * (rho * std::cos(phi)) +
                e2 * (rho * std::sin(phi));
            jac = rho;
        };
        n.lo0 = 0.0;
        n.hi0 = c->radius;
        n.lo1 = 0.0;
        n.hi1 = 2.0 * pi;
        n.lo2 = -0.5 * c->length;
        n.hi2 = 0.5 * c->length;
    } else if (const auto* t = std::get_if<TorusRegion>(&region)) {
        const Vec3 center = t->center;
        n.map = [center](double rho, double z, double phi, Vec3& p, double& jac) {
            p = center + Vec3{rho * std::cos(phi), rho * std::sin(phi), z};
            jac = rho;
        };
        n.lo0 = t->inner_radius;
        n.hi0 = t->outer_radius;
        n.lo1 = -0.5 * t->height;
        n.hi1 = 0.5 * t->height;
        n.lo2 = 0.0;
        n.hi2 = 2.0 * pi;
    } else {
        const auto& b = std::get<BoxRegion>(region);
        n.map = [](double x, double y, double z, Vec3& p, double& jac) {
            p = {x, y, z};
            jac = 1.0;
        };
        n.lo0 = b.lo.x;
        n.hi0 = b.hi.x;
        n.lo1 = b.lo.y;
        n.hi1 = b.hi.y;
        n.lo2 = b.lo.z;
        n.hi2 = b.hi.z;
    }
    return nested_volume(n, cfg);
}

} // namespace ab
