#include "latwave/dispersion.hpp"

#include <cmath>
#include <limits>

namespace latwave::dispersion {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 4 tan^2(pi/P) with the alternating mode P = 2 mapped to +inf.
double four_tan_squared(std::int64_t period)
{
    if (period == 2) return kInf;
    const double t = std::tan(kPi / static_cast<double>(period));
    return 4.0 * t * t;
}

// Left-hand side of the relation, without the mass term, and the factor
// that converts m0^2 into the right-hand side.
struct Relation {
    double lhs;
    double mass_factor;
};

Relation relation(DispersionForm form, std::int64_t N, const ExtendedIndex& M,
                  const GridSpec& grid, TanCoefficient coefficient)
{
    grid.validate();
    if (N < 2) throw DomainError("dispersion: period N must be >= 2");
    if (M.is_finite() && M.value() < 2) {
        throw DomainError("dispersion: wavelength M must be >= 2 or infinite");
    }
    const double c = grid.c;
    const double Nd = static_cast<double>(N);
    switch (form) {
        case DispersionForm::cayley: {
            const double time = std::pow(1.0 / (c * Nd * grid.tau), 2);
            const double space =
                M.is_infinite() ? 0.0 : std::pow(1.0 / (static_cast<double>(M.value()) * grid.eps), 2);
            const double h = grid.planck();
            return {time - space, c * c / (h * h)};
        }
        case DispersionForm::exponential: {
            const double time_factor = coefficient == TanCoefficient::symmetric ? 1.0 : 0.25;
            const double time = time_factor * four_tan_squared(N) / (c * c * grid.tau * grid.tau);
            const double space =
                M.is_infinite() ? 0.0 : four_tan_squared(M.value()) / (grid.eps * grid.eps);
            const double lhs = (std::isinf(time) && std::isinf(space))
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : time - space;
            return {lhs, c * c / (grid.hbar * grid.hbar)};
        }
        case DispersionForm::continuum: {
            const double w = 2.0 * kPi / (Nd * grid.tau);
            const double k =
                M.is_infinite() ? 0.0 : 2.0 * kPi / (static_cast<double>(M.value()) * grid.eps);
            return {w * w / (c * c) - k * k, c * c / (grid.hbar * grid.hbar)};
        }
    }
    throw DomainError("dispersion: unknown form");
}

}  // namespace

double mass_from_rest_period(std::int64_t N, const GridSpec& grid)
{
    grid.validate();
    if (N < 1) throw DomainError("mass spectrum: rest period N must be >= 1");
    return grid.planck() / (grid.c * grid.c * static_cast<double>(N) * grid.tau);
}

double dispersion_residual(DispersionForm form, std::int64_t N, const ExtendedIndex& M, double m0,
                           const GridSpec& grid, TanCoefficient coefficient)
{
    const Relation r = relation(form, N, M, grid, coefficient);
    return r.lhs - m0 * m0 * r.mass_factor;
}

double mass_for_mode(DispersionForm form, std::int64_t N, const ExtendedIndex& M,
                     const GridSpec& grid, TanCoefficient coefficient)
{
    const Relation r = relation(form, N, M, grid, coefficient);
    if (!std::isfinite(r.lhs)) {
        throw DomainError("dispersion: relation undefined for this (N, M) (tan(pi/2) term)");
    }
    if (r.lhs < 0.0) {
        throw DomainError("dispersion: mode is spacelike, no real rest mass solves the relation");
    }
    return std::sqrt(r.lhs / r.mass_factor);
}

std::vector<DispersionSolution> solve_modes(double m0, DispersionForm form, std::int64_t n_max,
                                            std::int64_t m_max, double tol, const GridSpec& grid)
{
    grid.validate();
    if (!(m0 >= 0.0)) throw DomainError("solve_modes: m0 must be >= 0");
    if (n_max < 2 || m_max < 2) throw DomainError("solve_modes: bounds must be >= 2");
    if (!(tol >= 0.0)) throw DomainError("solve_modes: tolerance must be >= 0");

    std::vector<DispersionSolution> out;
    auto consider = [&](std::int64_t N, const ExtendedIndex& M) {
        const double r = dispersion_residual(form, N, M, m0, grid);
        if (std::abs(r) <= tol) out.push_back({N, M, m0, form, r});
    };
    // Iteration order is already the (N, M) sort order.
    for (std::int64_t N = 2; N <= n_max; ++N) {
        for (std::int64_t M = 2; M <= m_max; ++M) consider(N, ExtendedIndex(M));
        consider(N, ExtendedIndex::infinity());
    }
    return out;
}

Quantization quantization_check(const kinematics::LatticeStep& step, double m0,
                                const GridSpec& grid, double tol)
{
    const kinematics::ParticleState s = kinematics::discrete_energy_momentum(m0, step, grid);
    const double h = grid.planck();
    const double p = kinematics::norm(s.p);

    Quantization q;
    q.N_real = s.E > 0.0 ? ExtendedReal(h / (grid.tau * s.E)) : ExtendedReal::infinity();
    q.M_real = p > 0.0 ? ExtendedReal(h / (grid.eps * p)) : ExtendedReal::infinity();

    auto nearest = [tol](double x) -> std::optional<std::int64_t> {
        const double r = std::round(x);
        if (std::abs(x - r) <= tol) return static_cast<std::int64_t>(r);
        return std::nullopt;
    };
    if (q.N_real.is_finite()) q.N = nearest(q.N_real.value());
    if (q.M_real.is_infinite()) {
        q.M = ExtendedIndex::infinity();
    } else if (auto m = nearest(q.M_real.value())) {
        q.M = ExtendedIndex(*m);
    }
    return q;
}

const char* to_string(DispersionForm form)
{
    switch (form) {
        case DispersionForm::exponential: return "exponential";
        case DispersionForm::cayley: return "cayley";
        case DispersionForm::continuum: return "continuum";
    }
    return "?";
}

}  // namespace latwave::dispersion
