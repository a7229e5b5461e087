#pragma once

// Continuum and lattice relativistic kinematics.
//
// Boosts are metric-preserving 4x4 matrices acting on (t, x, y, z) with
// eta = diag(1, -1, -1, -1). The closed-form scalar and vector transformation
// laws for waves and particles are provided separately as checks against
// the matrix route.

#include <array>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "latwave/common.hpp"
#include "latwave/grid.hpp"

namespace latwave::kinematics {

using Vec3 = std::array<double, 3>;
using Matrix4 = std::array<std::array<double, 4>, 4>;
using Rational = boost::multiprecision::cpp_rational;

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

struct FourVector {
    double t = 0.0;
    Vec3 s{0.0, 0.0, 0.0};

    [[nodiscard]] double minkowski_square() const { return t * t - dot(s, s); }
};

FourVector operator*(const Matrix4& m, const FourVector& v);
Matrix4 operator*(const Matrix4& a, const Matrix4& b);

/// Pure boost to a frame moving with velocity v. Throws if |v| >= c.
Matrix4 boost_matrix(const Vec3& v, double c);

/// max |L^T eta L - eta| over all entries.
double metric_defect(const Matrix4& m);

/// Kinematic state of a particle. u = p c^2 / E whenever E > 0.
struct ParticleState {
    double E = 0.0;
    Vec3 p{0.0, 0.0, 0.0};
    double m0 = 0.0;
    Vec3 u{0.0, 0.0, 0.0};
};

/// Builds the on-shell state with momentum p: E = sqrt(p^2 c^2 + m0^2 c^4).
ParticleState make_particle(double m0, const Vec3& p, double c);

/// Throws DomainError unless s sits on its mass shell (relative 1e-10) with
/// a subluminal (or, for m0 = 0, luminal) velocity consistent with p c^2/E.
void validate_state(const ParticleState& s, double c);

/// (E^2 - p^2 c^2 - m0^2 c^4) relative to m0^2 c^4, or to E^2 when m0 = 0.
double mass_shell_defect(const ParticleState& s, double c);

struct WaveVector {
    double w = 0.0;
    Vec3 k{0.0, 0.0, 0.0};
};

/// (w'/c, k') = boost(v) (w/c, k).
WaveVector transform_wave(double w, const Vec3& k, const Vec3& v, double c);

/// (E'/c, p') = boost(v) (E/c, p); velocity recomputed as p' c^2 / E'.
ParticleState transform_particle(const ParticleState& s, const Vec3& v, double c);

// Closed-form transformation laws for a frame velocity v, used as checks.
//   w' = w (1 - v.n / v_phase) / sqrt(1 - v^2/c^2)
//   k' = k + (v/v^2) [(v.k)(1 - sqrt(1 - v^2/c^2)) - v^2 k v_phase / c^2] / sqrt(1 - v^2/c^2)
//   |k'| = k sqrt(1 - v^2/c^2 + v^2 v_phase^2/c^4 + (v.n)^2/c^2 - 2 (v.n) v_phase/c^2)
//          / sqrt(1 - v^2/c^2)
// and the particle analogues with v_phase -> c^2/u, k -> p, w -> E.
double closed_form_wave_frequency(double w, const Vec3& k, const Vec3& v, double c);
Vec3 closed_form_wave_vector(double w, const Vec3& k, const Vec3& v, double c);
double closed_form_wave_number(double w, const Vec3& k, const Vec3& v, double c);
double closed_form_particle_energy(const ParticleState& s, const Vec3& v, double c);
Vec3 closed_form_particle_momentum(const ParticleState& s, const Vec3& v, double c);
double closed_form_particle_momentum_magnitude(const ParticleState& s, const Vec3& v, double c);

/// The wave associated with a particle: w = E/hbar, k = p/hbar.
struct DeBroglieWave {
    double w = 0.0;
    Vec3 k{0.0, 0.0, 0.0};
    ExtendedReal phase_velocity = ExtendedReal::infinity();  // w/|k|; infinite at rest
    double group_velocity = 0.0;                              // dE/dp = |p| c^2 / E
};

DeBroglieWave debroglie_map(const ParticleState& s, double hbar, double c);

/// A displacement between two lattice events: dn time steps, dj space steps.
struct LatticeStep {
    std::int64_t dn = 1;
    std::array<std::int64_t, 3> dj{0, 0, 0};

    [[nodiscard]] bool is_timelike(const GridSpec& grid) const;
};

/// Energy and momentum of a particle of rest mass m0 crossing `step`:
///   E = m0 c^2 (c dt) / sqrt((c dt)^2 - dx^2),  p = m0 c dx / sqrt((c dt)^2 - dx^2)
/// with u = dx/dt. Massive particles need a strictly timelike step.
ParticleState discrete_energy_momentum(double m0, const LatticeStep& step, const GridSpec& grid);

/// Lattice constants in exact rational form.
struct RationalGrid {
    Rational tau{1};
    Rational eps{1};
    Rational c{1};
};

/// p c^2 / E evaluated in exact rational arithmetic. The common square root
/// of E and p cancels, so only the rational numerators are formed.
std::array<Rational, 3> exact_momentum_velocity(const Rational& m0, const LatticeStep& step,
                                                const RationalGrid& grid);

/// dx/dt in exact rational arithmetic.
std::array<Rational, 3> exact_step_velocity(const LatticeStep& step, const RationalGrid& grid);

struct MassShellDifference {
    double residual_total = 0.0;     // {2E dE + dE^2}/c^2 - 2 p.dp - dp^2
    double residual_velocity = 0.0;  // dE - u_avg . dp,  u_avg = c^2 avg(p) / avg(E)
    double invariant = 0.0;          // dE^2/c^2 - dp^2
};

/// Total-difference analysis of the mass shell between consecutive states.
/// Both states must share m0 (relative 1e-10) and be on shell.
MassShellDifference total_difference_mass_shell(const ParticleState& s, const ParticleState& s_next,
                                                double c);

}  // namespace latwave::kinematics
