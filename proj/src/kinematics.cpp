#include "latwave/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace latwave::kinematics {
namespace {

constexpr std::array<double, 4> kEta{1.0, -1.0, -1.0, -1.0};

double gamma_factor(const Vec3& v, double c)
{
    const double beta2 = dot(v, v) / (c * c);
    if (!(beta2 < 1.0)) {
        throw DomainError("boost: frame speed |v| must be below c");
    }
    return 1.0 / std::sqrt(1.0 - beta2);
}

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 added(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

Vec3 unit_or_throw(const Vec3& k, const char* what)
{
    const double kn = norm(k);
    if (kn == 0.0) throw DomainError(what);
    return scaled(k, 1.0 / kn);
}

double speed_of(const ParticleState& s)
{
    const double u = norm(s.u);
    if (u == 0.0) {
        throw DomainError("closed-form particle law needs a moving particle (u > 0)");
    }
    return u;
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

FourVector operator*(const Matrix4& m, const FourVector& v)
{
    const std::array<double, 4> in{v.t, v.s[0], v.s[1], v.s[2]};
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r) {
        for (int k = 0; k < 4; ++k) out[r] += m[r][k] * in[k];
    }
    return {out[0], {out[1], out[2], out[3]}};
}

Matrix4 operator*(const Matrix4& a, const Matrix4& b)
{
    Matrix4 out{};
    for (int r = 0; r < 4; ++r) {
        for (int col = 0; col < 4; ++col) {
            for (int k = 0; k < 4; ++k) out[r][col] += a[r][k] * b[k][col];
        }
    }
    return out;
}

Matrix4 boost_matrix(const Vec3& v, double c)
{
    if (!(c > 0.0)) throw DomainError("boost: c must be positive");
    const double gamma = gamma_factor(v, c);
    const Vec3 beta = scaled(v, 1.0 / c);
    const double beta2 = dot(beta, beta);

    Matrix4 m{};
    m[0][0] = gamma;
    for (int i = 0; i < 3; ++i) {
        m[0][i + 1] = -gamma * beta[i];
        m[i + 1][0] = -gamma * beta[i];
        for (int j = 0; j < 3; ++j) {
            const double outer = beta2 > 0.0 ? (gamma - 1.0) * beta[i] * beta[j] / beta2 : 0.0;
            m[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + outer;
        }
    }
    return m;
}

double metric_defect(const Matrix4& m)
{
    double worst = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            double g = 0.0;
            for (int k = 0; k < 4; ++k) g += m[k][a] * kEta[k] * m[k][b];
            const double target = a == b ? kEta[a] : 0.0;
            worst = std::max(worst, std::abs(g - target));
        }
    }
    return worst;
}

ParticleState make_particle(double m0, const Vec3& p, double c)
{
    if (!(m0 >= 0.0)) throw DomainError("particle: rest mass must be >= 0");
    if (!(c > 0.0)) throw DomainError("particle: c must be positive");
    const double p2 = dot(p, p);
    const double E = std::sqrt(p2 * c * c + m0 * m0 * c * c * c * c);
    if (E == 0.0) throw DomainError("particle: massless state needs nonzero momentum");
    return {E, p, m0, scaled(p, c * c / E)};
}

double mass_shell_defect(const ParticleState& s, double c)
{
    const double c2 = c * c;
    const double pc = norm(s.p) * c;
    const double rest = s.m0 * s.m0 * c2 * c2;
    const double lhs = (s.E - pc) * (s.E + pc);
    const double scale = s.m0 > 0.0 ? rest : s.E * s.E;
    return (lhs - rest) / scale;
}

void validate_state(const ParticleState& s, double c)
{
    if (!(c > 0.0)) throw DomainError("particle: c must be positive");
    if (!(s.m0 >= 0.0)) throw DomainError("particle: rest mass must be >= 0");
    if (!(s.E > 0.0)) throw DomainError("particle: energy must be positive");
    // Compare against E^2 so near-lightlike states are judged fairly.
    const double pc = norm(s.p) * c;
    const double shell = (s.E - pc) * (s.E + pc) - s.m0 * s.m0 * c * c * c * c;
    if (std::abs(shell) > 1e-10 * s.E * s.E) {
        throw DomainError("particle: state is off its mass shell E^2 - p^2 c^2 = m0^2 c^4");
    }
    for (int i = 0; i < 3; ++i) {
        if (std::abs(s.u[i] - s.p[i] * c * c / s.E) > 1e-10 * c) {
            throw DomainError("particle: velocity differs from p c^2 / E");
        }
    }
    const double speed = norm(s.u);
    if (s.m0 > 0.0 && !(speed < c)) throw DomainError("particle: massive state needs |u| < c");
}

WaveVector transform_wave(double w, const Vec3& k, const Vec3& v, double c)
{
    const FourVector out = boost_matrix(v, c) * FourVector{w / c, k};
    return {out.t * c, out.s};
}

ParticleState transform_particle(const ParticleState& s, const Vec3& v, double c)
{
    validate_state(s, c);
    const FourVector out = boost_matrix(v, c) * FourVector{s.E / c, s.p};
    const double E = out.t * c;
    return {E, out.s, s.m0, scaled(out.s, c * c / E)};
}

double closed_form_wave_frequency(double w, const Vec3& k, const Vec3& v, double c)
{
    const Vec3 n = unit_or_throw(k, "closed-form wave law needs k != 0 (finite phase velocity)");
    const double v_phase = w / norm(k);
    return w * (1.0 - dot(v, n) / v_phase) / std::sqrt(1.0 - dot(v, v) / (c * c));
}

Vec3 closed_form_wave_vector(double w, const Vec3& k, const Vec3& v, double c)
{
    unit_or_throw(k, "closed-form wave law needs k != 0 (finite phase velocity)");
    const double v2 = dot(v, v);
    if (v2 == 0.0) return k;
    const double kn = norm(k);
    const double v_phase = w / kn;
    const double root = std::sqrt(1.0 - v2 / (c * c));
    const double bracket = dot(v, k) * (1.0 - root) - v2 * kn * v_phase / (c * c);
    return added(k, scaled(v, bracket / (v2 * root)));
}

double closed_form_wave_number(double w, const Vec3& k, const Vec3& v, double c)
{
    const Vec3 n = unit_or_throw(k, "closed-form wave law needs k != 0 (finite phase velocity)");
    const double kn = norm(k);
    const double v_phase = w / kn;
    const double c2 = c * c;
    const double v2 = dot(v, v);
    const double vn = dot(v, n);
    const double inner = 1.0 - v2 / c2 + v2 * v_phase * v_phase / (c2 * c2) + vn * vn / c2
                         - 2.0 * vn * v_phase / c2;
    return kn * std::sqrt(inner) / std::sqrt(1.0 - v2 / c2);
}

double closed_form_particle_energy(const ParticleState& s, const Vec3& v, double c)
{
    return s.E * (1.0 - dot(v, s.u) / (c * c)) / std::sqrt(1.0 - dot(v, v) / (c * c));
}

Vec3 closed_form_particle_momentum(const ParticleState& s, const Vec3& v, double c)
{
    const double v2 = dot(v, v);
    if (v2 == 0.0) return s.p;
    const double u = speed_of(s);
    const double root = std::sqrt(1.0 - v2 / (c * c));
    const double bracket = dot(v, s.p) * (1.0 - root) - v2 * norm(s.p) / u;
    return added(s.p, scaled(v, bracket / (v2 * root)));
}

double closed_form_particle_momentum_magnitude(const ParticleState& s, const Vec3& v, double c)
{
    const double u = speed_of(s);
    const double p = norm(s.p);
    const double c2 = c * c;
    const double v2 = dot(v, v);
    const double vp = dot(v, s.p);
    const double inner = p * p * (1.0 - v2 / c2) + p * p * v2 / (u * u) + vp * vp / c2 - 2.0 * p * vp / u;
    return std::sqrt(inner) / std::sqrt(1.0 - v2 / c2);
}

DeBroglieWave debroglie_map(const ParticleState& s, double hbar, double c)
{
    if (!(hbar > 0.0)) throw DomainError("de Broglie map: hbar must be positive");
    validate_state(s, c);
    DeBroglieWave out;
    out.w = s.E / hbar;
    out.k = scaled(s.p, 1.0 / hbar);
    const double kn = norm(out.k);
    out.phase_velocity = kn > 0.0 ? ExtendedReal(out.w / kn) : ExtendedReal::infinity();
    out.group_velocity = norm(s.p) * c * c / s.E;
    return out;
}

bool LatticeStep::is_timelike(const GridSpec& grid) const
{
    const double cdt = grid.c * static_cast<double>(dn) * grid.tau;
    double dx2 = 0.0;
    for (auto d : dj) dx2 += std::pow(static_cast<double>(d) * grid.eps, 2);
    return dn > 0 && cdt * cdt > dx2;
}

ParticleState discrete_energy_momentum(double m0, const LatticeStep& step, const GridSpec& grid)
{
    grid.validate();
    if (!(m0 >= 0.0)) throw DomainError("lattice step: rest mass must be >= 0");
    if (step.dn <= 0) throw DomainError("lattice step: dn must be a positive integer");
    if (!step.is_timelike(grid)) {
        throw DomainError("lattice step: (c dt)^2 > |dx|^2 required (strictly timelike step)");
    }
    const double dt = static_cast<double>(step.dn) * grid.tau;
    const double cdt = grid.c * dt;
    Vec3 dx{};
    for (int i = 0; i < 3; ++i) dx[i] = static_cast<double>(step.dj[i]) * grid.eps;
    const double root = std::sqrt(cdt * cdt - dot(dx, dx));

    ParticleState s;
    s.m0 = m0;
    s.E = m0 * grid.c * grid.c * cdt / root;
    s.p = scaled(dx, m0 * grid.c / root);
    s.u = scaled(dx, 1.0 / dt);
    return s;
}

std::array<Rational, 3> exact_step_velocity(const LatticeStep& step, const RationalGrid& grid)
{
    if (step.dn <= 0) throw DomainError("lattice step: dn must be a positive integer");
    const Rational dt = Rational(step.dn) * grid.tau;
    std::array<Rational, 3> u;
    for (int i = 0; i < 3; ++i) u[i] = Rational(step.dj[i]) * grid.eps / dt;
    return u;
}

std::array<Rational, 3> exact_momentum_velocity(const Rational& m0, const LatticeStep& step,
                                                const RationalGrid& grid)
{
    if (m0 <= 0) throw DomainError("exact velocity: rest mass must be positive");
    if (step.dn <= 0) throw DomainError("lattice step: dn must be a positive integer");
    const Rational cdt = grid.c * Rational(step.dn) * grid.tau;
    Rational dx2 = 0;
    for (auto d : step.dj) dx2 += Rational(d) * Rational(d) * grid.eps * grid.eps;
    if (!(cdt * cdt > dx2)) {
        throw DomainError("lattice step: (c dt)^2 > |dx|^2 required (strictly timelike step)");
    }
    // E sqrt(D) and p sqrt(D); the shared 1/sqrt(D) cancels in p c^2 / E.
    const Rational energy_num = m0 * grid.c * grid.c * cdt;
    std::array<Rational, 3> u;
    for (int i = 0; i < 3; ++i) {
        const Rational momentum_num = m0 * grid.c * Rational(step.dj[i]) * grid.eps;
        u[i] = momentum_num * grid.c * grid.c / energy_num;
    }
    return u;
}

MassShellDifference total_difference_mass_shell(const ParticleState& s, const ParticleState& s_next,
                                                double c)
{
    validate_state(s, c);
    validate_state(s_next, c);
    const double mass_scale = std::max({s.m0, s_next.m0, 1e-300});
    if (std::abs(s.m0 - s_next.m0) > 1e-10 * mass_scale) {
        throw DomainError("total difference: both states must share the rest mass");
    }
    const double c2 = c * c;
    const double dE = s_next.E - s.E;
    const Vec3 dp{s_next.p[0] - s.p[0], s_next.p[1] - s.p[1], s_next.p[2] - s.p[2]};
    const Vec3 p_avg{0.5 * (s_next.p[0] + s.p[0]), 0.5 * (s_next.p[1] + s.p[1]),
                     0.5 * (s_next.p[2] + s.p[2])};
    const double E_avg = 0.5 * (s_next.E + s.E);

    MassShellDifference out;
    out.residual_total = (2.0 * s.E * dE + dE * dE) / c2 - 2.0 * dot(s.p, dp) - dot(dp, dp);
    out.residual_velocity = dE - dot(scaled(p_avg, c2 / E_avg), dp);
    out.invariant = dE * dE / c2 - dot(dp, dp);
    return out;
}

}  // namespace latwave::kinematics
