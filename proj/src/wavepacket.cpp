#include "ab/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ab {

namespace {

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

double frac_to_nearest_int(double v) {
    return std::abs(v - std::round(v));
}

void check_core(const GridSpec2D& grid, double core_x, double core_y) {
    const double fi = (core_x - grid.x0) / grid.dx;
    const double fj = (core_y - grid.y0) / grid.dx;
    if (fi <= 0.0 || fi >= grid.nx - 1 || fj <= 0.0 || fj >= grid.ny - 1)
        throw GeometryError("flux core outside the grid interior");
    if (frac_to_nearest_int(fi) < 1e-9 || frac_to_nearest_int(fj) < 1e-9)
        throw GeometryError("flux core on a grid line");
}

} // namespace

void GridSpec2D::validate() const {
    if (nx < 64 || ny < 64)
        throw ValidationError("grid: nx and ny must be >= 64");
    if (!(dx > 0.0) || !(dt > 0.0))
        throw ValidationError("grid: dx and dt must be > 0");
    if (dt > 0.5 * dx * dx)
        throw StabilityError("grid: dt exceeds the dx^2/2 stability guard");
}

double LatticeGauge::plaquette(int i, int j) const {
    return tx(i, j) + ty(i + 1, j) - tx(i, j + 1) - ty(i, j);
}

double LatticeGauge::loop_sum(int i0, int j0, int i1, int j1) const {
    double s = 0.0;
    for (int i = i0; i < i1; ++i) s += tx(i, j0) - tx(i, j1);
    for (int j = j0; j < j1; ++j) s += ty(i1, j) - ty(i0, j);
    return s;
}

LatticeGauge LatticeGauge::zero(const GridSpec2D& grid) {
    LatticeGauge g;
    g.nx = grid.nx;
    g.ny = grid.ny;
    g.theta_x.assign(static_cast<std::size_t>(grid.nx - 1) * grid.ny, 0.0);
    g.theta_y.assign(static_cast<std::size_t>(grid.nx) * (grid.ny - 1), 0.0);
    return g;
}

LatticeGauge build_lattice_gauge(double flux_alpha, const GridSpec2D& grid,
                                 double core_x, double core_y) {
    grid.validate();
    check_core(grid, core_x, core_y);
    LatticeGauge g = LatticeGauge::zero(grid);
    if (flux_alpha == 0.0) return g;
    const double scale = flux_alpha / (2.0 * pi);
    auto dphi = [&](double ax, double ay, double bx, double by) {
        const double ux = ax - core_x, uy = ay - core_y;
        const double vx = bx - core_x, vy = by - core_y;
        return std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
    };
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i + 1 < grid.nx; ++i)
            g.tx(i, j) = scale * dphi(grid.x(i), grid.y(j), grid.x(i + 1), grid.y(j));
    for (int j = 0; j + 1 < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            g.ty(i, j) = scale * dphi(grid.x(i), grid.y(j), grid.x(i), grid.y(j + 1));
    return g;
}

LatticeGauge build_cut_gauge(double flux_alpha, const GridSpec2D& grid,
                             double core_x, double core_y) {
    grid.validate();
    check_core(grid, core_x, core_y);
    LatticeGauge g = LatticeGauge::zero(grid);
    if (flux_alpha == 0.0) return g;
    for (int j = 0; j + 1 < grid.ny; ++j) {
        if (!(grid.y(j) < core_y && core_y < grid.y(j + 1))) continue;
        for (int i = 0; i < grid.nx; ++i)
            if (grid.x(i) > core_x) g.ty(i, j) = flux_alpha;
    }
    return g;
}

double norm(const WavepacketState& state, const GridSpec2D& grid) {
    double s = 0.0;
    for (const auto& a : state.psi) s += std::norm(a);
    return std::sqrt(s) * grid.dx;
}

WavepacketState init_gaussian(const GridSpec2D& grid, double cx, double cy,
                              double sigma, double k0x, double k0y) {
    PacketParams p;
    p.center_left_x = p.center_right_x = cx;
    p.center_left_y = p.center_right_y = cy;
    p.sigma = sigma;
    p.k0x = k0x;
    p.k0y = k0y;
    return init_two_beam_state(grid, p);
}

WavepacketState init_two_beam_state(const GridSpec2D& grid,
                                    const PacketParams& p) {
    grid.validate();
    if (!(p.sigma > 0.0)) throw ValidationError("packet.sigma: must be > 0");
    const double xmin = grid.x0, xmax = grid.x(grid.nx - 1);
    const double ymin = grid.y0, ymax = grid.y(grid.ny - 1);
    struct C { double x, y; };
    const C centers[2] = {{p.center_left_x, p.center_left_y},
                          {p.center_right_x, p.center_right_y}};
    for (const auto& c : centers) {
        if (c.x - 3 * p.sigma < xmin || c.x + 3 * p.sigma > xmax ||
            c.y - 3 * p.sigma < ymin || c.y + 3 * p.sigma > ymax)
            throw GeometryError("packet 3-sigma footprint leaves the domain");
        if (p.check_barrier) {
            const double d = std::hypot(c.x - p.barrier_x, c.y - p.barrier_y);
            if (d < 3 * p.sigma + p.barrier_radius)
                throw GeometryError("packet 3-sigma footprint overlaps the barrier");
        }
    }
    WavepacketState st;
    st.nx = grid.nx;
    st.ny = grid.ny;
    st.psi.assign(static_cast<std::size_t>(grid.nx) * grid.ny, cplx{});
    const bool same = centers[0].x == centers[1].x && centers[0].y == centers[1].y;
    double kx[2] = {p.k0x, p.k0x}, ky[2] = {p.k0y, p.k0y};
    if (p.aim) {
        const double kmag = std::hypot(p.k0x, p.k0y);
        for (int c = 0; c < 2; ++c) {
            const double ax = p.aim_x - centers[c].x;
            const double ay = p.aim_y - centers[c].y;
            const double an = std::hypot(ax, ay);
            if (!(an > 0.0))
                throw GeometryError("aim point coincides with a packet center");
            kx[c] = kmag * ax / an;
            ky[c] = kmag * ay / an;
        }
    }
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            cplx amp{};
            for (int c = 0; c < (same ? 1 : 2); ++c) {
                const double dx = x - centers[c].x, dy = y - centers[c].y;
                amp += std::exp(-(dx * dx + dy * dy) /
                                (4.0 * p.sigma * p.sigma)) *
                       std::polar(1.0, kx[c] * dx + ky[c] * dy);
            }
            st.at(i, j) = amp;
        }
    const double n = norm(st, grid);
    for (auto& a : st.psi) a /= n;
    return st;
}

PotentialMap make_circular_barrier(const GridSpec2D& grid, double cx, double cy,
                                   double radius, double height) {
    PotentialMap v(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double d = std::hypot(grid.x(i) - cx, grid.y(j) - cy);
            if (d <= radius) v[static_cast<std::size_t>(j) * grid.nx + i] = height;
        }
    return v;
}

namespace {

// One Cayley factor (I + i k H_d)^-1 (I - i k H_d) along a grid line.
// hop[m] couples unknown m to m+1 with coefficient -t0 * hop[m] in H.
struct LineSolver {
    std::vector<cplx> diag, upper, lower, rhs, scratch;

    void solve(cplx* psi, int n, std::ptrdiff_t stride, const cplx* hop,
               const double* v_half, double kappa, double t0) {
        diag.resize(n);
        upper.resize(n);
        lower.resize(n);
        rhs.resize(n);
        scratch.resize(n);
        const cplx ik(0.0, kappa);
        const cplx hop_c = -ik * t0; // off-diagonal of I + ik H
        for (int m = 0; m < n; ++m) {
            const cplx d = ik * (2.0 * t0 + v_half[m]);
            diag[m] = 1.0 + d;
            // rhs = (I - ik H) psi = 2 psi - (I + ik H) psi
            cplx acc = (1.0 - d) * psi[m * stride];
            if (m + 1 < n) acc -= hop_c * hop[m] * psi[(m + 1) * stride];
            if (m > 0) acc -= hop_c * std::conj(hop[m - 1]) * psi[(m - 1) * stride];
            rhs[m] = acc;
            if (m + 1 < n) upper[m] = hop_c * hop[m];
            if (m > 0) lower[m] = hop_c * std::conj(hop[m - 1]);
        }
        // Thomas
        scratch[0] = upper[0] / diag[0];
        rhs[0] /= diag[0];
        for (int m = 1; m < n; ++m) {
            const cplx den = diag[m] - lower[m] * scratch[m - 1];
            if (m + 1 < n) scratch[m] = upper[m] / den;
            rhs[m] = (rhs[m] - lower[m] * rhs[m - 1]) / den;
        }
        for (int m = n - 2; m >= 0; --m) rhs[m] -= scratch[m] * rhs[m + 1];
        for (int m = 0; m < n; ++m) psi[m * stride] = rhs[m];
    }
};

} // namespace

void propagate(WavepacketState& state, const GridSpec2D& grid,
               const LatticeGauge& gauge, const PotentialMap& barrier,
               int steps, const PropagateOptions& opts) {
    grid.validate();
    const int nx = grid.nx, ny = grid.ny;
    if (state.nx != nx || state.ny != ny || gauge.nx != nx || gauge.ny != ny)
        throw ShapeError("state/gauge dimensions do not match the grid");
    const std::size_t ncell = static_cast<std::size_t>(nx) * ny;
    if (!barrier.empty() && barrier.size() != ncell)
        throw ShapeError("barrier map size does not match the grid");

    const double t0 = 1.0 / (2.0 * grid.dx * grid.dx); // hopping amplitude
    auto v_at = [&](int i, int j) {
        return barrier.empty() ? 0.0
                               : barrier[static_cast<std::size_t>(j) * nx + i];
    };

    // Precomputed hop coefficients e^{-i theta} and split potential.
    std::vector<cplx> hop_x(static_cast<std::size_t>(nx - 1) * ny);
    std::vector<cplx> hop_y(static_cast<std::size_t>(nx) * (ny - 1));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i)
            hop_x[static_cast<std::size_t>(j) * (nx - 1) + i] =
                std::polar(1.0, -gauge.tx(i, j));
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
            hop_y[static_cast<std::size_t>(j) * nx + i] =
                std::polar(1.0, -gauge.ty(i, j));
    std::vector<double> v_half(ncell);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            v_half[static_cast<std::size_t>(j) * nx + i] = 0.5 * v_at(i, j);

    // Absorbing mask (cos^2 ramp), identity when disabled.
    std::vector<double> mask;
    if (opts.absorber) {
        mask.resize(ncell);
        auto ramp = [&](int m, int n) {
            const double w = opts.absorber_fraction * (n - 1);
            const double d = std::min(m, n - 1 - m);
            if (d >= w) return 1.0;
            const double s = std::sin(0.5 * pi * d / w);
            return s * s;
        };
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                mask[static_cast<std::size_t>(j) * nx + i] =
                    ramp(i, nx) * ramp(j, ny);
    }

    const double norm0 = norm(state, grid);
    LineSolver solver;
    std::vector<cplx> hop_col(std::max(nx, ny));
    std::vector<double> v_col(std::max(nx, ny));

    const double kappa_x = 0.25 * grid.dt; // two half steps in x
    const double kappa_y = 0.5 * grid.dt;

    auto sweep_x = [&](double kappa) {
        for (int j = 0; j < ny; ++j)
            solver.solve(&state.at(0, j), nx, 1,
                         &hop_x[static_cast<std::size_t>(j) * (nx - 1)],
                         &v_half[static_cast<std::size_t>(j) * nx], kappa, t0);
    };
    auto sweep_y = [&](double kappa) {
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j + 1 < ny; ++j)
                hop_col[j] = hop_y[static_cast<std::size_t>(j) * nx + i];
            for (int j = 0; j < ny; ++j)
                v_col[j] = v_half[static_cast<std::size_t>(j) * nx + i];
            solver.solve(&state.at(i, 0), ny, nx, hop_col.data(), v_col.data(),
                         kappa, t0);
        }
    };

    for (int s = 0; s < steps; ++s) {
        sweep_x(kappa_x);
        sweep_y(kappa_y);
        sweep_x(kappa_x);
        if (opts.absorber) {
            for (std::size_t m = 0; m < ncell; ++m) state.psi[m] *= mask[m];
        } else {
            const double n = norm(state, grid);
            if (n > norm0 * (1.0 + 1e-6))
                throw StabilityError("norm growth beyond unitarity budget");
        }
        ++state.time_index;
    }
}

InterferenceProfile detect(const WavepacketState& state, const GridSpec2D& grid,
                           double x_line) {
    const double fi = (x_line - grid.x0) / grid.dx;
    if (fi < 0.0 || fi > grid.nx - 1)
        throw GeometryError("detection line outside the domain");
    const int i0 = std::min(static_cast<int>(fi), grid.nx - 2);
    const double w = fi - i0;
    InterferenceProfile p;
    p.position.resize(grid.ny);
    p.intensity.resize(grid.ny);
    for (int j = 0; j < grid.ny; ++j) {
        p.position[j] = grid.y(j);
        p.intensity[j] = (1.0 - w) * std::norm(state.at(i0, j)) +
                         w * std::norm(state.at(i0 + 1, j));
    }
    return p;
}

double wrap_phase(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    if (a > pi) a -= 2.0 * pi;
    return a;
}

namespace {

struct Spectrum {
    double k = 0.0;        // refined dominant wavenumber
    cplx projection{};     // windowed projection at k
    double window_sum = 0.0;
};

// Hann-windowed, mean-removed harmonic analysis of a profile.
Spectrum analyze(const InterferenceProfile& prof, double forced_k) {
    const std::size_t n = prof.intensity.size();
    if (n < 16) throw NoFringeError("profile too short for fringe analysis");
    const double dy = prof.position[1] - prof.position[0];
    std::vector<double> s(n);
    double mean = 0.0;
    for (double v : prof.intensity) mean += v;
    mean /= static_cast<double>(n);
    double wsum = 0.0, ssum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double w =
            0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(m) / (n - 1));
        s[m] = (prof.intensity[m] - mean) * w;
        wsum += w;
        ssum += std::abs(s[m]);
    }
    Spectrum out;
    out.window_sum = wsum;
    if (ssum <= 1e-300) throw NoFringeError("flat profile, no fringes");

    if (forced_k <= 0.0) {
        // coarse DFT peak over bins clear of the envelope
        const std::size_t m_lo = 3, m_hi = n / 2;
        std::vector<double> mag(m_hi + 1, 0.0);
        double best = 0.0, magsum = 0.0;
        std::size_t best_m = 0;
        for (std::size_t m = m_lo; m <= m_hi; ++m) {
            cplx acc{};
            for (std::size_t q = 0; q < n; ++q)
                acc += s[q] * std::polar(1.0, -2.0 * pi *
                                                  static_cast<double>(m * q) / n);
            mag[m] = std::abs(acc);
            magsum += mag[m];
            if (mag[m] > best) {
                best = mag[m];
                best_m = m;
            }
        }
        const double mean_mag = magsum / static_cast<double>(m_hi - m_lo + 1);
        if (best < 3.0 * mean_mag)
            throw NoFringeError("no dominant fringe harmonic");
        double delta = 0.0;
        if (best_m > m_lo && best_m < m_hi) {
            const double a = mag[best_m - 1], b = mag[best_m], c = mag[best_m + 1];
            const double den = a - 2.0 * b + c;
            if (den != 0.0) delta = 0.5 * (a - c) / den;
        }
        out.k = 2.0 * pi * (static_cast<double>(best_m) + delta) /
                (static_cast<double>(n) * dy);
    } else {
        out.k = forced_k;
    }
    cplx proj{};
    for (std::size_t m = 0; m < n; ++m)
        proj += s[m] * std::polar(1.0, -out.k * prof.position[m]);
    out.projection = proj;
    return out;
}

} // namespace

FringeAnalysis dominant_fringe(const InterferenceProfile& profile) {
    const Spectrum sp = analyze(profile, 0.0);
    FringeAnalysis out;
    out.wavenumber = sp.k;
    out.amplitude = 2.0 * std::abs(sp.projection) / sp.window_sum;
    out.phase = std::arg(sp.projection);
    return out;
}

double fringe_shift(const InterferenceProfile& profile,
                    const InterferenceProfile& reference) {
    if (profile.position.size() != reference.position.size())
        throw GeometryError("profiles sampled on different lines");
    for (std::size_t m = 0; m < profile.position.size(); ++m)
        if (std::abs(profile.position[m] - reference.position[m]) > 1e-12)
            throw GeometryError("profiles sampled on different lines");
    const Spectrum ref = analyze(reference, 0.0);
    const Spectrum prof = analyze(profile, ref.k);
    return wrap_phase(std::arg(prof.projection * std::conj(ref.projection)));
}

} // namespace ab
