#ifndef AB_WAVEPACKET_HPP
#define AB_WAVEPACKET_HPP

#include <complex>
#include <vector>

#include "ab/errors.hpp"

namespace ab {

// Natural units throughout this module: hbar = m = q = 1. The flux enters
// only through the dimensionless alpha = q Phi / hbar.

struct GridSpec2D {
    int nx = 0, ny = 0;
    double dx = 0.0;
    double dt = 0.0;
    double x0 = 0.0, y0 = 0.0; // node (0,0) position

    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dx; }
    void validate() const; // nx,ny >= 64; dt <= dx^2/2 stability guard
};

// Per-link Peierls phases: theta_x(i,j) on the link (i,j)->(i+1,j),
// theta_y(i,j) on (i,j)->(i,j+1).
struct LatticeGauge {
    int nx = 0, ny = 0;
    std::vector<double> theta_x; // (nx-1) * ny
    std::vector<double> theta_y; // nx * (ny-1)

    double& tx(int i, int j) { return theta_x[static_cast<std::size_t>(j) * (nx - 1) + i]; }
    double& ty(int i, int j) { return theta_y[static_cast<std::size_t>(j) * nx + i]; }
    double tx(int i, int j) const { return theta_x[static_cast<std::size_t>(j) * (nx - 1) + i]; }
    double ty(int i, int j) const { return theta_y[static_cast<std::size_t>(j) * nx + i]; }

    // Counterclockwise phase sum around plaquette with lower-left node (i,j).
    double plaquette(int i, int j) const;
    // Counterclockwise phase sum around the rectangle of nodes
    // [i0,i1] x [j0,j1].
    double loop_sum(int i0, int j0, int i1, int j1) const;

    static LatticeGauge zero(const GridSpec2D& grid);
};

// Winding-angle gauge: theta(a->b) = (alpha/2pi) * signed azimuthal angle of
// b relative to a, seen from the core.
LatticeGauge build_lattice_gauge(double flux_alpha, const GridSpec2D& grid,
                                 double core_x, double core_y);

// Gauge-equivalent cut encoding: the full alpha sits on y-links crossing the
// ray {y = core_y, x > core_x}; all other links are zero. In this gauge a
// plain packet far from the cut represents the same physical state for every
// alpha, which makes flux periodicity exact.
LatticeGauge build_cut_gauge(double flux_alpha, const GridSpec2D& grid,
                             double core_x, double core_y);

struct WavepacketState {
    int nx = 0, ny = 0;
    std::vector<std::complex<double>> psi; // row-major, i fastest
    int time_index = 0;

    std::complex<double>& at(int i, int j) { return psi[static_cast<std::size_t>(j) * nx + i]; }
    const std::complex<double>& at(int i, int j) const { return psi[static_cast<std::size_t>(j) * nx + i]; }
};

double norm(const WavepacketState& state, const GridSpec2D& grid);

struct PacketParams {
    double center_left_x = 0.0, center_left_y = 0.0;
    double center_right_x = 0.0, center_right_y = 0.0;
    double sigma = 0.0;         // Gaussian width
    double k0x = 0.0, k0y = 0.0; // common momentum
    // When set, each packet's momentum keeps the magnitude |k0| but points
    // from its center toward (aim_x, aim_y), so the beams converge there.
    bool aim = false;
    double aim_x = 0.0, aim_y = 0.0;
    // optional barrier used only for the footprint check
    bool check_barrier = false;
    double barrier_x = 0.0, barrier_y = 0.0, barrier_radius = 0.0;
};

WavepacketState init_two_beam_state(const GridSpec2D& grid,
                                    const PacketParams& params);
WavepacketState init_gaussian(const GridSpec2D& grid, double cx, double cy,
                              double sigma, double k0x, double k0y);

using PotentialMap = std::vector<double>; // nx*ny, row-major

PotentialMap make_circular_barrier(const GridSpec2D& grid, double cx, double cy,
                                   double radius, double height);

struct PropagateOptions {
    bool absorber = false;
    double absorber_fraction = 0.1; // cos^2 ramp over this outer fraction
};

// Strang-split Crank-Nicolson step on the gauge-linked lattice Hamiltonian;
// each directional factor is an exact Cayley (tridiagonal) solve, so the
// no-absorber evolution is unitary to roundoff.
void propagate(WavepacketState& state, const GridSpec2D& grid,
               const LatticeGauge& gauge, const PotentialMap& barrier,
               int steps, const PropagateOptions& opts = {});

struct InterferenceProfile {
    std::vector<double> position;  // sample coordinates along the line
    std::vector<double> intensity; // |psi|^2
};

// |psi|^2 along the vertical line x = x_line (linear interpolation in x).
InterferenceProfile detect(const WavepacketState& state, const GridSpec2D& grid,
                           double x_line);

struct FringeAnalysis {
    double wavenumber = 0.0; // dominant spatial frequency, rad per unit length
    double amplitude = 0.0;
    double phase = 0.0;
};

FringeAnalysis dominant_fringe(const InterferenceProfile& profile);

// Phase offset of the dominant fringe harmonic relative to the reference
// profile, in (-pi, pi].
double fringe_shift(const InterferenceProfile& profile,
                    const InterferenceProfile& reference);

// Circular difference a - b wrapped to (-pi, pi].
double wrap_phase(double a);

} // namespace ab

#endif
