#include "ab/energy.hpp"

#include <cmath>

#include "ab/constants.hpp"
#include "ab/errors.hpp"

namespace ab {

using constants::c_light;
using constants::eps0;
using constants::mu0;
using constants::pi;

void ElectronState::validate() const {
    if (!position.finite() || !velocity.finite() || !std::isfinite(charge))
        throw ValidationError("electron: non-finite component");
    if (velocity.norm() >= 0.1 * c_light)
        throw ValidationError("electron.velocity: quasi-static model needs |v| < 0.1c");
}

Vec3 b_field_of_moving_charge(const ElectronState& e, const Vec3& r) {
    const Vec3 d = r - e.position;
    const double d2 = d.norm2();
    if (d2 == 0.0)
        throw SingularityError("b_field_of_moving_charge at the charge position");
    return e.velocity.cross(d) *
           (mu0 * e.charge / (4.0 * pi * d2 * std::sqrt(d2)));
}

IntegralResult interaction_energy(const SourceSpec& spec, const ElectronState& e,
                                  const QuadConfig& cfg) {
    e.validate();
    if (inside_source(spec, e.position))
        throw GeometryError("electron inside the source volume");
    const Region support = support_region(spec);
    if (e.charge == 0.0 || e.velocity.norm() == 0.0)
        return {0.0, 0.0, true};
    auto f = [&](const Vec3& r) {
        return b_field(spec, r).dot(b_field_of_moving_charge(e, r)) / mu0;
    };
    return volume_integral(f, support, cfg);
}

EnergyBreakdown energy_decomposition(const SourceSpec& spec,
                                     const ElectronState& e,
                                     const Region& region, double core_excision,
                                     const QuadConfig& cfg) {
    e.validate();
    if (!(core_excision > 0.0))
        throw ValidationError("core_excision: must be > 0");
    if (inside_source(spec, e.position))
        throw GeometryError("electron inside the source volume");

    EnergyBreakdown out;
    out.region = region;
    out.core_excision_radius = core_excision;

    QuadConfig term_cfg = cfg;
    term_cfg.accept_best_on_cap = true; // sharp boundaries; keep best estimates

    {
        auto f = [&](const Vec3& r) {
            return b_field(spec, r).norm2() / (2.0 * mu0);
        };
        const IntegralResult r = volume_integral(f, region, term_cfg);
        out.u1 = r.value;
        out.u1_error = r.error_estimate;
    }
    if (e.charge != 0.0 && e.velocity.norm() > 0.0) {
        const double exc2 = core_excision * core_excision;
        auto f = [&](const Vec3& r) {
            if ((r - e.position).norm2() <= exc2) return 0.0;
            return b_field_of_moving_charge(e, r).norm2() / (2.0 * mu0);
        };
        const IntegralResult r = volume_integral(f, region, term_cfg);
        out.u2 = r.value;
        out.u2_error = r.error_estimate;
        const IntegralResult ui = interaction_energy(spec, e, cfg);
        out.u_int = ui.value;
        out.u_int_error = ui.error_estimate;
    }
    return out;
}

double toroid_inductance(const ToroidSpec& spec) {
    spec.validate();
    return mu0 * spec.turns * static_cast<double>(spec.turns) * spec.height *
           std::log(spec.outer_radius / spec.inner_radius) / (2.0 * pi);
}

namespace {

// Poloidal vector potential (A_rho, A_z)(rho, z) of the ideal toroid,
// from the planar curl-inversion kernel over the cross-section rectangle.
// Any (A_rho, A_z) with dA_rho/dz - dA_z/drho = B_phi reproduces the toroid
// field, so the planar construction is a valid gauge for the sheet integral.
struct ToroidPoloidalA {
    const ToroidSpec& t;
    QuadConfig cfg;

    void eval(double rho, double z, double& a_rho, double& a_z) const {
        const double b0 = mu0 * t.turns * t.current / (2.0 * pi);
        // z' is integrated in closed form; only the radial 1D rule remains.
        //   \int dz' (z-z')/d^2   = (1/2) ln(u2^2+dr^2) - (1/2) ln(u1^2+dr^2)
        //   \int dz' dr/d^2       = atan(u2/dr) - atan(u1/dr)
        // with u = z - z' running from u1 = z - h/2 to u2 = z + h/2.
        const double u1 = z - 0.5 * t.height;
        const double u2 = z + 0.5 * t.height;
        auto fr = [&](double rp) {
            const double dr = rho - rp;
            return b0 / rp * 0.5 *
                   std::log((u2 * u2 + dr * dr) / (u1 * u1 + dr * dr));
        };
        auto fz = [&](double rp) {
            const double dr = rho - rp;
            if (dr == 0.0) return 0.0;
            return -b0 / rp * (std::atan(u2 / dr) - std::atan(u1 / dr));
        };
        a_rho = integrate_1d(fr, t.inner_radius, t.outer_radius, cfg).value /
                (2.0 * pi);
        a_z = integrate_1d(fz, t.inner_radius, t.outer_radius, cfg).value /
              (2.0 * pi);
    }
};

} // namespace

IntegralResult energy_from_current(const ToroidSpec& spec,
                                   const QuadConfig& cfg) {
    spec.validate();
    if (spec.current == 0.0) return {0.0, 0.0, true};

    const double a = spec.inner_radius;
    const double b = spec.outer_radius;
    const double h = spec.height;
    // Sheet points are offset slightly off the winding surface; A is continuous
    // there and the kernel stays integrable for the nested 1D rules.
    const double eps = 3e-4 * std::min(b - a, h);

    QuadConfig inner_cfg;
    inner_cfg.rel_tol = std::max(cfg.rel_tol * 0.3, 1e-6);
    inner_cfg.abs_tol = 0.0;
    inner_cfg.max_depth = 32;
    inner_cfg.accept_best_on_cap = true;
    ToroidPoloidalA apol{spec, inner_cfg};

    QuadConfig edge_cfg = cfg;
    edge_cfg.rel_tol = std::max(cfg.rel_tol, 1e-5);
    edge_cfg.abs_tol = 0.0;
    edge_cfg.accept_best_on_cap = true;

    const double ni = spec.turns * spec.current;
    double value = 0.0, err = 0.0;
    // U = (NI/2) * counterclockwise circulation of A_pol around the
    // cross-section rectangle (inner wall up, top outward, outer wall down,
    // bottom inward).
    {
        auto f = [&](double z) {
            double ar, az;
            apol.eval(a - eps, z, ar, az);
            return az;
        };
        auto g = [&](double z) {
            double ar, az;
            apol.eval(b + eps, z, ar, az);
            return az;
        };
        const IntegralResult r1 = integrate_1d(f, -0.5 * h, 0.5 * h, edge_cfg);
        const IntegralResult r2 = integrate_1d(g, -0.5 * h, 0.5 * h, edge_cfg);
        value += r1.value - r2.value;
        err += r1.error_estimate + r2.error_estimate;
    }
    {
        auto f = [&](double rho) {
            double ar, az;
            apol.eval(rho, 0.5 * h + eps, ar, az);
            return ar;
        };
        auto g = [&](double rho) {
            double ar, az;
            apol.eval(rho, -0.5 * h - eps, ar, az);
            return ar;
        };
        const IntegralResult r1 = integrate_1d(f, a, b, edge_cfg);
        const IntegralResult r2 = integrate_1d(g, a, b, edge_cfg);
        value += r1.value - r2.value;
        err += r1.error_estimate + r2.error_estimate;
    }
    return {0.5 * ni * value, 0.5 * std::abs(ni) * err, true};
}

IntegralResult energy_from_field(const ToroidSpec& spec, const QuadConfig& cfg) {
    spec.validate();
    const SourceSpec src = spec;
    const Region region = support_region(src);
    auto f = [&](const Vec3& r) {
        return b_field(src, r).norm2() / (2.0 * mu0);
    };
    return volume_integral(f, region, cfg);
}

void FieldSnapshotGrid::validate() const {
    if (nx < 3 || ny < 3 || nz < 3)
        throw ShapeError("grid needs at least 3 cells per dimension");
    if (!(spacing > 0.0) || !(dt > 0.0))
        throw ShapeError("grid spacing and dt must be > 0");
    const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
    auto check = [&](const std::vector<Vec3>& v, const char* name,
                     bool optional) {
        if (optional && v.empty()) return;
        if (v.size() != n)
            throw ShapeError(std::string("grid field ") + name +
                             " has mismatched size");
    };
    check(e0, "E(t)", false);
    check(b0, "B(t)", false);
    check(e1, "E(t+dt)", false);
    check(b1, "B(t+dt)", false);
    check(j0, "j(t)", true);
    check(j1, "j(t+dt)", true);
}

PoyntingResidual poynting_residual(const FieldSnapshotGrid& g) {
    g.validate();
    auto u_of = [](const Vec3& e, const Vec3& b) {
        return 0.5 * eps0 * e.norm2() + 0.5 / mu0 * b.norm2();
    };
    auto s_of = [](const Vec3& e, const Vec3& b) { return e.cross(b) / mu0; };
    auto jv = [](const std::vector<Vec3>& j, std::size_t i) {
        return j.empty() ? Vec3{} : j[i];
    };

    PoyntingResidual out;
    out.nx = g.nx - 2;
    out.ny = g.ny - 2;
    out.nz = g.nz - 2;
    out.residual.assign(
        static_cast<std::size_t>(out.nx) * out.ny * out.nz, 0.0);

    double scale = 0.0;
    for (std::size_t i = 0; i < g.e0.size(); ++i) {
        scale = std::max(scale, u_of(g.e0[i], g.b0[i]));
        scale = std::max(scale, u_of(g.e1[i], g.b1[i]));
    }
    out.energy_density_scale = scale;

    const double inv2h = 1.0 / (2.0 * g.spacing);
    double sum2 = 0.0;
    std::size_t m = 0;
    for (int k = 1; k + 1 < g.nz; ++k)
        for (int j = 1; j + 1 < g.ny; ++j)
            for (int i = 1; i + 1 < g.nx; ++i, ++m) {
                const std::size_t c = g.idx(i, j, k);
                const double dudt =
                    (u_of(g.e1[c], g.b1[c]) - u_of(g.e0[c], g.b0[c])) / g.dt;
                // div S at the midpoint time: average of the two snapshots
                double div_s = 0.0;
                const std::size_t xp = g.idx(i + 1, j, k), xm = g.idx(i - 1, j, k);
                const std::size_t yp = g.idx(i, j + 1, k), ym = g.idx(i, j - 1, k);
                const std::size_t zp = g.idx(i, j, k + 1), zm = g.idx(i, j, k - 1);
                div_s += 0.5 * (s_of(g.e0[xp], g.b0[xp]).x -
                                s_of(g.e0[xm], g.b0[xm]).x +
                                s_of(g.e1[xp], g.b1[xp]).x -
                                s_of(g.e1[xm], g.b1[xm]).x) * inv2h;
                div_s += 0.5 * (s_of(g.e0[yp], g.b0[yp]).y -
                                s_of(g.e0[ym], g.b0[ym]).y +
                                s_of(g.e1[yp], g.b1[yp]).y -
                                s_of(g.e1[ym], g.b1[ym]).y) * inv2h;
                div_s += 0.5 * (s_of(g.e0[zp], g.b0[zp]).z -
                                s_of(g.e0[zm], g.b0[zm]).z +
                                s_of(g.e1[zp], g.b1[zp]).z -
                                s_of(g.e1[zm], g.b1[zm]).z) * inv2h;
                const double ej = 0.5 * (g.e0[c].dot(jv(g.j0, c)) +
                                         g.e1[c].dot(jv(g.j1, c)));
                const double res = dudt + div_s + ej;
                out.residual[m] = res;
                out.max_abs = std::max(out.max_abs, std::abs(res));
                sum2 += res * res;
            }
    out.l2_norm = std::sqrt(sum2 / std::max<std::size_t>(m, 1));
    return out;
}

} // namespace ab
