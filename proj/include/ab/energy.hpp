#ifndef AB_ENERGY_HPP
#define AB_ENERGY_HPP

#include <vector>

#include "ab/geomfields.hpp"
#include "ab/quadrature.hpp"
#include "ab/vec3.hpp"

namespace ab {

struct ElectronState {
    Vec3 position;  // m
    Vec3 velocity;  // m/s
    double charge = 0.0; // C

    void validate() const; // |v| < 0.1c, finite components
};

// Quasi-static field of a slowly moving point charge:
// B2 = (mu0 q / 4pi) v x (r - r_e) / |r - r_e|^3
Vec3 b_field_of_moving_charge(const ElectronState& e, const Vec3& r);

// Cross term (1/mu0) \int B1 . B2 d^3r, truncated exactly to the B1 support.
IntegralResult interaction_energy(const SourceSpec& spec, const ElectronState& e,
                                  const QuadConfig& cfg);

struct EnergyBreakdown {
    double u1 = 0.0;    // source self-energy over the region, J
    double u2 = 0.0;    // electron self-energy over the region minus core ball, J
    double u_int = 0.0; // cross term over the B1 support, J
    double u1_error = 0.0;
    double u2_error = 0.0;
    double u_int_error = 0.0;
    Region region;
    double core_excision_radius = 0.0;

    double total() const { return u1 + u2 + u_int; }
};

EnergyBreakdown energy_decomposition(const SourceSpec& spec,
                                     const ElectronState& e,
                                     const Region& region, double core_excision,
                                     const QuadConfig& cfg);

// Toroid stored energy, U = (1/2) \oint K . A over the winding sheet.
IntegralResult energy_from_current(const ToroidSpec& spec, const QuadConfig& cfg);

// Toroid stored energy, U = (1/2mu0) \int B . B over the torus interior.
IntegralResult energy_from_field(const ToroidSpec& spec, const QuadConfig& cfg);

// Closed-form inductance of the ideal rectangular-cross-section toroid.
double toroid_inductance(const ToroidSpec& spec);

// (E, B, j) on a uniform grid at two adjacent times.
struct FieldSnapshotGrid {
    int nx = 0, ny = 0, nz = 0;
    double spacing = 0.0; // m
    double dt = 0.0;      // s
    std::vector<Vec3> e0, b0, j0; // at t
    std::vector<Vec3> e1, b1, j1; // at t + dt

    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    }
    void validate() const; // throws ShapeError on mismatched sizes
};

// du/dt + div S + E.j on interior cells, centered differences.
struct PoyntingResidual {
    int nx = 0, ny = 0, nz = 0; // interior dimensions (grid minus 1-cell margin)
    std::vector<double> residual; // row-major, W/m^3
    double max_abs = 0.0;
    double l2_norm = 0.0;
    double energy_density_scale = 0.0; // max |u| seen, J/m^3
};

PoyntingResidual poynting_residual(const FieldSnapshotGrid& snap);

} // namespace ab

#endif
