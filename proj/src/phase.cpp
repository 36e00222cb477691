#include "ab/phase.hpp"

#include <cmath>

#include "ab/constants.hpp"
#include "ab/errors.hpp"

namespace ab {

using constants::hbar;
using constants::pi;

namespace {

// Best available vector potential for the source: closed form when it exists,
// otherwise the B -> A reconstruction.
FieldFunction vector_potential(const SourceSpec& spec, const QuadConfig& cfg) {
    const bool analytic =
        std::holds_alternative<FluxLineSpec>(spec) ||
        (std::holds_alternative<SolenoidSpec>(spec) &&
         std::get<SolenoidSpec>(spec).infinite());
    if (analytic)
        return [spec](const Vec3& r) { return a_field_analytic(spec, r); };
    return [spec, cfg](const Vec3& r) { return a_field_from_b(spec, r, cfg).value; };
}

void check_outside(const SourceSpec& spec, const Path& path, const char* which) {
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        const Vec3 a = path.vertices[i];
        const Vec3 b = path.vertices[i + 1];
        for (int k = 0; k <= 8; ++k) {
            const Vec3 p = a + (b - a) * (static_cast<double>(k) / 8.0);
            if (inside_source(spec, p))
                throw GeometryError(std::string(which) +
                                    " beam path intersects the source");
        }
    }
}

double mod_2pi(double phase) {
    double m = std::fmod(phase, 2.0 * pi);
    if (m < 0.0) m += 2.0 * pi;
    return m;
}

// Trapezoid integral of q v . A over a trajectory, with a Richardson error
// estimate from the half-resolution rule.
IntegralResult coupling_time_integral(const Trajectory& traj,
                                      const FieldFunction& a, double charge) {
    const auto& s = traj.samples;
    std::vector<double> f(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        f[i] = charge * s[i].velocity.dot(a(s[i].position));
    double full = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        full += 0.5 * (f[i] + f[i - 1]) * (s[i].t - s[i - 1].t);
    double half = 0.0;
    for (std::size_t i = 2; i < s.size(); i += 2)
        half += 0.5 * (f[i] + f[i - 2]) * (s[i].t - s[i - 2].t);
    if (s.size() % 2 == 0 && s.size() >= 2) // odd leftover interval
        half += 0.5 * (f[s.size() - 1] + f[s.size() - 2]) *
                (s.back().t - s[s.size() - 2].t);
    return {full, std::abs(full - half) / 3.0, true};
}

} // namespace

const char* route_name(Route r) {
    switch (r) {
        case Route::LineIntegral: return "line_integral";
        case Route::Flux: return "flux";
        case Route::ActionDifference: return "action_difference";
        case Route::InteractionEnergy: return "interaction_energy";
        case Route::Wavepacket: return "wavepacket";
    }
    return "?";
}

PhaseResult PhaseResult::make(double phase, Route route, double err) {
    return {phase, mod_2pi(phase), route, std::abs(err)};
}

void BeamPair::validate(const SourceSpec& spec) const {
    left.validate();
    right.validate();
    if ((left.vertices.front() - right.vertices.front()).norm() > 1e-12 ||
        (left.vertices.back() - right.vertices.back()).norm() > 1e-12)
        throw GeometryError("beam pair endpoints do not coincide");
    check_outside(spec, left, "left");
    check_outside(spec, right, "right");
}

Path BeamPair::closed_loop() const {
    Path loop = left;
    const Path rr = right.reversed();
    loop.vertices.insert(loop.vertices.end(), rr.vertices.begin() + 1,
                         rr.vertices.end());
    loop.vertices.back() = loop.vertices.front();
    loop.closed = true;
    return loop;
}

BeamPair BeamPair::semicircles(const Vec3& center, const Vec3& axis,
                               double radius, int segments_per_side) {
    BeamPair bp;
    // left runs ccw about `axis` so that left + reverse(right) winds +1
    bp.left = Path::arc(center, axis, radius, pi, 2.0 * pi, segments_per_side);
    bp.right = Path::arc(center, axis, radius, pi, 0.0, segments_per_side);
    bp.right.vertices.front() = bp.left.vertices.front();
    bp.right.vertices.back() = bp.left.vertices.back();
    return bp;
}

void Trajectory::validate() const {
    if (samples.size() < 3)
        throw GeometryError("trajectory needs at least 3 samples");
    double vmax = 0.0;
    for (const auto& s : samples) vmax = std::max(vmax, s.velocity.norm());
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw GeometryError("trajectory times not strictly increasing");
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const Vec3 fd = (samples[i + 1].position - samples[i - 1].position) /
                        (samples[i + 1].t - samples[i - 1].t);
        if ((fd - samples[i].velocity).norm() > 0.01 * vmax)
            throw GeometryError(
                "trajectory velocity inconsistent with position differences");
    }
}

Trajectory Trajectory::circular_arc(const Vec3& center, const Vec3& axis,
                                    double radius, double angle0, double angle1,
                                    double speed, int n_samples) {
    const Vec3 u = axis.normalized();
    const Vec3 trial = std::abs(u.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = (trial - u * trial.dot(u)).normalized();
    const Vec3 e2 = u.cross(e1);
    const double arc = std::abs(angle1 - angle0) * radius;
    const double duration = arc / speed;
    const double omega = (angle1 - angle0) / duration;
    Trajectory tr;
    tr.samples.reserve(n_samples + 1);
    for (int i = 0; i <= n_samples; ++i) {
        const double t = duration * i / n_samples;
        const double th = angle0 + omega * t;
        TrajectorySample s;
        s.t = t;
        s.position = center + e1 * (radius * std::cos(th)) +
                     e2 * (radius * std::sin(th));
        s.velocity =
            (e2 * std::cos(th) - e1 * std::sin(th)) * (radius * omega);
        tr.samples.push_back(s);
    }
    return tr;
}

PhaseResult phase_via_line_integral(const SourceSpec& spec, const BeamPair& beams,
                                    double charge, const QuadConfig& cfg) {
    beams.validate(spec);
    if (charge == 0.0) return PhaseResult::make(0.0, Route::LineIntegral, 0.0);
    const FieldFunction a = vector_potential(spec, cfg);
    const IntegralResult li = line_integral(a, beams.closed_loop(), cfg);
    const double scale = charge / hbar;
    return PhaseResult::make(scale * li.value, Route::LineIntegral,
                             std::abs(scale) * li.error_estimate);
}

PhaseResult phase_via_flux(const SourceSpec& spec, double charge) {
    validate(spec);
    return PhaseResult::make(charge * total_flux(spec) / hbar, Route::Flux, 0.0);
}

ActionPhaseResult action_phase_difference(const BeamPair& beams, double speed,
                                          const SourceSpec& spec, double charge,
                                          double mass, const QuadConfig& cfg) {
    beams.validate(spec);
    if (!(speed > 0.0)) throw ValidationError("speed: must be > 0");
    const FieldFunction a = vector_potential(spec, cfg);
    const IntegralResult s_left = line_integral(a, beams.left, cfg);
    const IntegralResult s_right = line_integral(a, beams.right, cfg);
    // q \int A . v dt = q \int A . dr, independent of the traversal rate
    const double coupling =
        charge * (s_left.value - s_right.value) / hbar;
    const double err = std::abs(charge / hbar) *
                       (s_left.error_estimate + s_right.error_estimate);

    ActionPhaseResult out;
    out.result = PhaseResult::make(coupling, Route::ActionDifference, err);
    const double t_left = beams.left.length() / speed;
    const double t_right = beams.right.length() / speed;
    const double t_scale = std::max(t_left, t_right);
    if (std::abs(t_left - t_right) > 1e-12 * t_scale) {
        out.kinetic_terms_cancel = false;
        out.kinetic_mismatch =
            0.5 * mass * speed * speed * (t_left - t_right) / hbar;
    }
    return out;
}

PhaseResult phase_via_interaction_energy(const SourceSpec& spec,
                                         const Trajectory& left,
                                         const Trajectory& right, double charge,
                                         const QuadConfig& cfg) {
    left.validate();
    right.validate();
    if ((left.samples.front().position - right.samples.front().position).norm() >
            1e-9 ||
        (left.samples.back().position - right.samples.back().position).norm() >
            1e-9)
        throw GeometryError("trajectories do not share endpoints");
    for (const auto* tr : {&left, &right})
        for (const auto& s : tr->samples)
            if (inside_source(spec, s.position))
                throw GeometryError("trajectory enters the source volume");
    if (charge == 0.0)
        return PhaseResult::make(0.0, Route::InteractionEnergy, 0.0);

    const FieldFunction a = vector_potential(spec, cfg);
    const IntegralResult ul = coupling_time_integral(left, a, charge);
    const IntegralResult ur = coupling_time_integral(right, a, charge);
    return PhaseResult::make((ul.value - ur.value) / hbar,
                             Route::InteractionEnergy,
                             (ul.error_estimate + ur.error_estimate) / hbar);
}

Eq7Result verify_eq7(const SourceSpec& spec, const ElectronState& e,
                     const QuadConfig& cfg) {
    e.validate();
    if (const auto* s = std::get_if<SolenoidSpec>(&spec)) {
        const Vec3 d = e.position - s->center;
        const double z = d.dot(s->axis);
        const double rho = (d - s->axis * z).norm();
        const bool clear = rho >= 1.1 * s->radius ||
                           std::abs(z) >= 0.5 * s->length + 0.1 * s->radius;
        if (!clear)
            throw GeometryError("electron too close to the solenoid (standoff 0.1 R)");
    } else if (inside_source(spec, e.position)) {
        throw GeometryError("electron inside the source volume");
    }

    Eq7Result out;
    const IntegralResult lhs = interaction_energy(spec, e, cfg);
    out.lhs = lhs.value;
    out.lhs_error_estimate = lhs.error_estimate;
    if (e.charge != 0.0) {
        const VectorIntegralResult a = a_field_from_b(spec, e.position, cfg);
        out.rhs = e.charge * e.velocity.dot(a.value);
        out.rhs_error_estimate =
            std::abs(e.charge) * e.velocity.norm() * a.error_estimate;
    }
    const double denom = std::max(std::abs(out.lhs), std::abs(out.rhs));
    out.rel_error = denom > 1e-300 ? std::abs(out.lhs - out.rhs) / denom : 0.0;
    return out;
}

} // namespace ab
