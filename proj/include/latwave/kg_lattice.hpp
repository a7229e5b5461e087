#pragma once

// Lattice Klein-Gordon operator in 1+1 dimensions. With the per-axis second
// difference D f = f+ - 2f + f- and double average A f = (f+ + 2f + f-)/4,
//
//   L[psi] = -(1/(c^2 tau^2)) D_n A_j psi + (1/eps^2) D_j A_n psi
//            - (m0^2 c^2 / hbar^2) A_j A_n psi
//
// Time is open (the residual covers interior slices 1..Nt-2); space is
// periodic or shrinking according to the slab's grid.

#include <cstddef>
#include <span>
#include <vector>

#include "latwave/common.hpp"
#include "latwave/grid.hpp"
#include "latwave/waves.hpp"

namespace latwave::kg {

struct KGParams {
    double m0 = 0.0;
    GridSpec grid{};

    /// m0^2 c^2 / hbar^2.
    [[nodiscard]] double mass_term() const;
    void validate() const;
};

/// Residual field on interior time slices: Nt-2 rows, Nx columns (periodic)
/// or Nx-2 columns (shrinking, interior sites only).
FieldSlab apply_kg_operator(const FieldSlab& field, const KGParams& params);

/// Max |L[psi]| for the plane wave sampled on an extent x extent slab with
/// shrinking spatial boundary.
double plane_wave_residual(const waves::WaveSpec& spec, const KGParams& params, std::size_t extent);

/// -(D_n psi)/(A_n psi) for the pure time mode exp(2 pi i n / N) at an
/// interior site; analytically 4 tan^2(pi/N). Infinite when A_n psi = 0.
ExtendedReal calibrate_time_coefficient(std::int64_t N, std::size_t extent);

struct EvolveOptions {
    /// psi[j + Nx] = exp(i bloch_phase) psi[j]; 0 is plain periodicity.
    double bloch_phase = 0.0;
};

/// Implicit time stepping. Each new slice solves the cyclic tridiagonal
/// system collecting every psi[n+1] term of L[psi] = 0. The system has
/// constant coefficients, so its inverse is formed once (as the response to
/// a unit source) and applied as a discrete convolution; with
/// bloch_phase = 0 this makes the update exactly translation-equivariant.
///
/// Returns all steps + 2 slices, the two initial slices first.
FieldSlab evolve(std::span<const Complex> previous, std::span<const Complex> current,
                 std::size_t steps, const KGParams& params, const EvolveOptions& options = {});

/// Solver for a cyclic tridiagonal system
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]   (indices mod n)
/// with complex coefficients, via Sherman-Morrison on the Thomas algorithm.
/// lower[0] couples to x[n-1] and upper[n-1] couples to x[0].
class CyclicTridiagonal {
public:
    CyclicTridiagonal(std::vector<Complex> lower, std::vector<Complex> diag,
                      std::vector<Complex> upper);

    [[nodiscard]] std::vector<Complex> solve(std::span<const Complex> rhs) const;
    [[nodiscard]] std::size_t size() const { return diag_.size(); }

private:
    [[nodiscard]] std::vector<Complex> thomas(std::span<const Complex> rhs) const;

    std::vector<Complex> lower_;
    std::vector<Complex> diag_;   // modified diagonal
    std::vector<Complex> upper_;
    std::vector<Complex> c_prime_;
    std::vector<Complex> denom_;
    std::vector<Complex> z_;      // A' z = u
    Complex gamma_{};
    Complex corner_low_{};        // lower[0]
    Complex corner_high_{};       // upper[n-1]
    Complex factor_{};            // v.z
};

}  // namespace latwave::kg
