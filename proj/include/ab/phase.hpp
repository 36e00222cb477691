#ifndef AB_PHASE_HPP
#define AB_PHASE_HPP

#include <vector>

#include "ab/energy.hpp"
#include "ab/geomfields.hpp"
#include "ab/quadrature.hpp"

namespace ab {

// Two beam segments from a common source point to a common screen point,
// passing on opposite sides of the source. left + reverse(right) closes.
struct BeamPair {
    Path left;
    Path right;

    void validate(const SourceSpec& spec) const;
    Path closed_loop() const;

    // Symmetric semicircular beams around `center` in the plane normal to
    // `axis`, from the point at angle pi to the point at angle 0.
    static BeamPair semicircles(const Vec3& center, const Vec3& axis,
                                double radius, int segments_per_side);
};

struct TrajectorySample {
    double t = 0.0; // s
    Vec3 position;
    Vec3 velocity;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    void validate() const; // monotone t, velocity vs centered differences
    // Constant-speed circular arc, exact tangential velocities.
    static Trajectory circular_arc(const Vec3& center, const Vec3& axis,
                                   double radius, double angle0, double angle1,
                                   double speed, int n_samples);
};

enum class Route { LineIntegral, Flux, ActionDifference, InteractionEnergy, Wavepacket };

const char* route_name(Route r);

struct PhaseResult {
    double phase = 0.0;          // rad, signed (left minus right convention)
    double phase_mod_2pi = 0.0;  // in [0, 2pi)
    Route route = Route::LineIntegral;
    double error_estimate = 0.0; // rad

    static PhaseResult make(double phase, Route route, double err);
};

// (q/hbar) \oint A . dr around left + reverse(right).
PhaseResult phase_via_line_integral(const SourceSpec& spec, const BeamPair& beams,
                                    double charge, const QuadConfig& cfg);

// q Phi0 / hbar for a single winding of the confined flux.
PhaseResult phase_via_flux(const SourceSpec& spec, double charge);

struct ActionPhaseResult {
    PhaseResult result;            // A-coupling part of (S1 - S2)/hbar
    double kinetic_mismatch = 0.0; // rad, nonzero when traversal times differ
    bool kinetic_terms_cancel = true;
};

// (S1 - S2)/hbar with S = \int dt (m v^2 / 2 + q A . v), both paths traversed
// at the same constant speed.
ActionPhaseResult action_phase_difference(const BeamPair& beams, double speed,
                                          const SourceSpec& spec, double charge,
                                          double mass, const QuadConfig& cfg);

// (1/hbar) \int [q v . A1 along left - q v . A1 along right] dt.
PhaseResult phase_via_interaction_energy(const SourceSpec& spec,
                                         const Trajectory& left,
                                         const Trajectory& right, double charge,
                                         const QuadConfig& cfg);

struct Eq7Result {
    double lhs = 0.0; // (1/mu0) \int B1 . B2 over the B1 support, J
    double rhs = 0.0; // q v . A1(r_e) with A1 reconstructed from B1, J
    double rel_error = 0.0;
    double lhs_error_estimate = 0.0;
    double rhs_error_estimate = 0.0;
};

// Field-overlap interaction energy against the potential-based coupling.
Eq7Result verify_eq7(const SourceSpec& spec, const ElectronState& e,
                     const QuadConfig& cfg);

} // namespace ab

#endif
