#pragma once

// Dispersion relations tying (N, M, m0) together, the discrete rest-mass
// spectrum and energy/momentum quantization.
//
//   cayley (linear):      (1/c^2)(1/(N tau))^2 - (1/(M eps))^2 = m0^2 c^2 / h^2
//   exponential (tan):    (4/(c^2 tau^2)) tan^2(pi/N) - (4/eps^2) tan^2(pi/M) = m0^2 c^2 / hbar^2
//   continuum:            w^2/c^2 - k^2 = m0^2 c^2 / hbar^2,  w = 2pi/(N tau), k = 2pi/(M eps)
//
// The tan relation carries the factor 4 on both terms; that is what the
// lattice operator certifies. TanCoefficient::as_printed selects the
// asymmetric variant (1 on the time term) for comparison only.

#include <cstdint>
#include <optional>
#include <vector>

#include "latwave/common.hpp"
#include "latwave/grid.hpp"
#include "latwave/kinematics.hpp"

namespace latwave::dispersion {

enum class DispersionForm { exponential, cayley, continuum };

enum class TanCoefficient { symmetric, as_printed };

/// m0 = h / (c^2 N tau).
double mass_from_rest_period(std::int64_t N, const GridSpec& grid);

/// Signed residual lhs - m0^2 c^2/hbar^2 (or /h^2 for the linear relation).
/// For the exponential form, N = 2 or M = 2 put tan(pi/2) into the relation:
/// the residual is +inf (N = 2), -inf (M = 2), or NaN when both are 2.
double dispersion_residual(DispersionForm form, std::int64_t N, const ExtendedIndex& M, double m0,
                           const GridSpec& grid,
                           TanCoefficient coefficient = TanCoefficient::symmetric);

/// The rest mass that makes the residual vanish. Throws DomainError when the
/// mode is spacelike (negative m0^2) or the relation is undefined.
double mass_for_mode(DispersionForm form, std::int64_t N, const ExtendedIndex& M,
                     const GridSpec& grid, TanCoefficient coefficient = TanCoefficient::symmetric);

struct DispersionSolution {
    std::int64_t N = 2;
    ExtendedIndex M = ExtendedIndex(2);
    double m0 = 0.0;
    DispersionForm form = DispersionForm::cayley;
    double residual = 0.0;

    friend bool operator==(const DispersionSolution&, const DispersionSolution&) = default;
};

/// Exhaustive scan over 2 <= N <= n_max and M in {2..m_max, infinity}, sorted
/// by (N, M) with M = infinity last.
std::vector<DispersionSolution> solve_modes(double m0, DispersionForm form, std::int64_t n_max,
                                            std::int64_t m_max, double tol, const GridSpec& grid);

struct Quantization {
    ExtendedReal N_real = ExtendedReal(0.0);  // h / (tau E)
    ExtendedReal M_real = ExtendedReal(0.0);  // h / (eps |p|); infinite at p = 0
    std::optional<std::int64_t> N;            // nearest integer, when within tol
    std::optional<ExtendedIndex> M;           // nearest integer or infinity
};

/// Energy and momentum from the lattice step, read back as period and
/// wavelength through E = h/(N tau), p = h/(M eps).
Quantization quantization_check(const kinematics::LatticeStep& step, double m0,
                                const GridSpec& grid, double tol);

const char* to_string(DispersionForm form);

}  // namespace latwave::dispersion
