#pragma once

// Lattice plane waves and the two-mode beat.
//
// Exponential form:  A exp{2 pi i (n/N - j/M)}                  (periodic)
// Cayley form:       A ((1 + i pi/N)/(1 - i pi/N))^n ((1 - i pi/M)/(1 + i pi/M))^j
//                    (quasi-periodic: unimodular, phase 2 arctan(pi/N) per step)
//
// Frequencies follow w = 2 pi / (N tau), k = 2 pi / (M eps); M = infinity is
// the zero-wavenumber (pure time) mode.

#include <cstdint>

#include "latwave/common.hpp"
#include "latwave/grid.hpp"

namespace latwave::waves {

enum class WaveForm { exponential, cayley };

struct WaveSpec {
    WaveForm form = WaveForm::exponential;
    std::int64_t N = 2;                     // period in time steps
    ExtendedIndex M = ExtendedIndex(2);     // wavelength in space steps, or infinity
    Complex amplitude{1.0, 0.0};

    /// Throws DomainError unless N >= 2 and (M >= 2 or M infinite).
    void validate() const;
};

Complex eval_exponential(const WaveSpec& spec, std::int64_t n, std::int64_t j);
Complex eval_cayley(const WaveSpec& spec, std::int64_t n, std::int64_t j);

/// Dispatches on spec.form.
Complex eval(const WaveSpec& spec, std::int64_t n, std::int64_t j);

/// Phase advance per time step of the Cayley base, 2 arctan(pi/N).
double cayley_time_phase(std::int64_t N);
/// Phase advance per space step of the Cayley base, 2 arctan(pi/M) (0 for M infinite).
double cayley_space_phase(const ExtendedIndex& M);

/// |eval_form(n, j) - exp{2 pi i (n/N - j/M)}|.
double continuum_limit_error(WaveForm form, std::int64_t N, const ExtendedIndex& M,
                             std::int64_t n, std::int64_t j);

/// Samples the wave over an nt x nx slab starting at (n, j) = (0, 0).
FieldSlab sample(const WaveSpec& spec, const GridSpec& grid, std::size_t nt, std::size_t nx);

/// Two real modes cos 2pi(t/T - x/lambda) + cos 2pi(t/T2 - x/lambda2).
/// A negative wavelength encodes a mode travelling the other way.
struct BeatSpec {
    double T = 1.0;
    double T2 = 1.0;
    double lambda = 1.0;
    double lambda2 = 1.0;
};

/// psi[n][j] at t = n tau, x = j eps, as the sum of the two cosines.
FieldSlab beat_field(const BeatSpec& b, const GridSpec& grid);

/// The product form 2 cos pi{t(1/T - 1/T2) - x(1/l - 1/l2)} cos pi{t(1/T + 1/T2) - x(1/l + 1/l2)}.
double beat_product_form(const BeatSpec& b, double t, double x);

struct BeatVelocities {
    ExtendedReal phase = ExtendedReal::infinity();  // (1/T + 1/T2) / (1/l + 1/l2)
    double group = 0.0;                             // (1/T - 1/T2) / (1/l - 1/l2)
};

/// Throws DomainError when 1/lambda == 1/lambda2 (group velocity undefined).
BeatVelocities beat_velocities(const BeatSpec& b);

/// Raised when an envelope measurement has nothing to track.
class MeasurementError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Centered box windows (in samples) used to coarse-grain |psi|^2 before
/// locating the envelope.
struct EnvelopeWindow {
    std::size_t time_steps = 1;
    std::size_t space_sites = 1;
};

/// One fast-carrier period of the beat, converted to samples of `grid`.
EnvelopeWindow fast_period_window(const BeatSpec& b, const GridSpec& grid);

/// Tracks one envelope maximum of a real beat field and returns the
/// least-squares slope of its position against time, in eps/tau units.
///
/// |psi|^2 is box-averaged over `window`; per time slice the tracked lobe is
/// the local maximum nearest the previous position, refined by a parabola
/// through the three samples around it.
double measure_group_velocity(const FieldSlab& field, const EnvelopeWindow& window);

/// Same, with the window taken from the known carrier of `b`.
double measure_group_velocity(const FieldSlab& field, const BeatSpec& b);

}  // namespace latwave::waves
