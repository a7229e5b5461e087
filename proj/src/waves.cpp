#include "latwave/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace latwave::waves {
namespace {

// (1 + i theta) / (1 - i theta) = ((1 - theta^2) + 2 i theta) / (1 + theta^2)
Complex cayley_base(double theta)
{
    const double d = 1.0 + theta * theta;
    return {(1.0 - theta * theta) / d, 2.0 * theta / d};
}

// base^e by repeated squaring. Squaring doubles any modulus error, so each
// product is pulled back onto the unit circle.
Complex unimodular_power(Complex base, std::int64_t e)
{
    std::uint64_t m = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
    if (e < 0) base = std::conj(base);

    Complex result{1.0, 0.0};
    while (m != 0) {
        if (m & 1U) {
            result *= base;
            result /= std::abs(result);
        }
        m >>= 1U;
        if (m != 0) {
            base *= base;
            base /= std::abs(base);
        }
    }
    return result;
}

struct Plane {
    std::size_t rows;
    std::size_t cols;
    std::vector<double> v;

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

// Centered box average of width w along time; keeps only full windows.
Plane box_time(const Plane& in, std::size_t w)
{
    Plane out{in.rows - w + 1, in.cols, std::vector<double>((in.rows - w + 1) * in.cols)};
    for (std::size_t r = 0; r < out.rows; ++r) {
        for (std::size_t c = 0; c < in.cols; ++c) {
            double acc = 0.0;
            for (std::size_t m = 0; m < w; ++m) acc += in.at(r + m, c);
            out.at(r, c) = acc / static_cast<double>(w);
        }
    }
    return out;
}

// Box average of width w along space; output sample i covers sites i..i+w-1
// (wrapping when periodic, full windows only otherwise).
Plane box_space(const Plane& in, std::size_t w, bool periodic)
{
    const std::size_t cols = periodic ? in.cols : in.cols - w + 1;
    Plane out{in.rows, cols, std::vector<double>(in.rows * cols)};
    for (std::size_t r = 0; r < in.rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (std::size_t m = 0; m < w; ++m) acc += in.at(r, (c + m) % in.cols);
            out.at(r, c) = acc / static_cast<double>(w);
        }
    }
    return out;
}

}  // namespace

void WaveSpec::validate() const
{
    if (N < 2) throw DomainError("wave: period N must be an integer >= 2");
    if (M.is_finite() && M.value() < 2) {
        throw DomainError("wave: wavelength M must be an integer >= 2 or infinite");
    }
}

Complex eval_exponential(const WaveSpec& spec, std::int64_t n, std::int64_t j)
{
    spec.validate();
    if (spec.M.is_infinite()) return spec.amplitude * unit_phase(n % spec.N, spec.N);
    // n/N - j/M = (n M - j N) / (N M), reduced exactly before the trig call
    const std::int64_t M = spec.M.value();
    const __int128 den = static_cast<__int128>(spec.N) * M;
    __int128 num = (static_cast<__int128>(n) * M - static_cast<__int128>(j) * spec.N) % den;
    if (num < 0) num += den;
    if (den > std::numeric_limits<std::int64_t>::max()) {
        throw DomainError("wave: N * M exceeds the 64-bit phase range");
    }
    return spec.amplitude
           * unit_phase(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Complex eval_cayley(const WaveSpec& spec, std::int64_t n, std::int64_t j)
{
    spec.validate();
    Complex z = unimodular_power(cayley_base(kPi / static_cast<double>(spec.N)), n);
    if (spec.M.is_finite()) {
        const Complex space_base = std::conj(cayley_base(kPi / static_cast<double>(spec.M.value())));
        z *= unimodular_power(space_base, j);
    }
    return spec.amplitude * z;
}

Complex eval(const WaveSpec& spec, std::int64_t n, std::int64_t j)
{
    return spec.form == WaveForm::exponential ? eval_exponential(spec, n, j)
                                              : eval_cayley(spec, n, j);
}

double cayley_time_phase(std::int64_t N) { return 2.0 * std::atan(kPi / static_cast<double>(N)); }

double cayley_space_phase(const ExtendedIndex& M)
{
    return M.is_infinite() ? 0.0 : 2.0 * std::atan(kPi / static_cast<double>(M.value()));
}

double continuum_limit_error(WaveForm form, std::int64_t N, const ExtendedIndex& M,
                             std::int64_t n, std::int64_t j)
{
    const WaveSpec lattice{form, N, M, {1.0, 0.0}};
    const WaveSpec continuum{WaveForm::exponential, N, M, {1.0, 0.0}};
    return std::abs(eval(lattice, n, j) - eval_exponential(continuum, n, j));
}

FieldSlab sample(const WaveSpec& spec, const GridSpec& grid, std::size_t nt, std::size_t nx)
{
    spec.validate();
    FieldSlab out(nt, nx, grid);
    for (std::size_t n = 0; n < nt; ++n) {
        for (std::size_t j = 0; j < nx; ++j) {
            out(n, j) = eval(spec, static_cast<std::int64_t>(n), static_cast<std::int64_t>(j));
        }
    }
    return out;
}

FieldSlab beat_field(const BeatSpec& b, const GridSpec& grid)
{
    grid.validate();
    for (double v : {b.T, b.T2, b.lambda, b.lambda2}) {
        if (!std::isfinite(v) || v == 0.0) {
            throw DomainError("beat: periods and wavelengths must be finite and nonzero");
        }
    }
    if (grid.Nt < 2 || grid.Nx < 2) throw DomainError("beat: grid extents must be >= 2");
    const double spatial_beat = std::abs(1.0 / b.lambda - 1.0 / b.lambda2);
    if (spatial_beat > 0.0 && static_cast<double>(grid.Nx) * grid.eps < 2.0 / spatial_beat) {
        throw DomainError("beat: grid must span at least two envelope periods in space");
    }

    FieldSlab out(grid.Nt, grid.Nx, grid);
    for (std::size_t n = 0; n < grid.Nt; ++n) {
        const double t = static_cast<double>(n) * grid.tau;
        for (std::size_t j = 0; j < grid.Nx; ++j) {
            const double x = static_cast<double>(j) * grid.eps;
            out(n, j) = std::cos(2.0 * kPi * (t / b.T - x / b.lambda))
                        + std::cos(2.0 * kPi * (t / b.T2 - x / b.lambda2));
        }
    }
    return out;
}

double beat_product_form(const BeatSpec& b, double t, double x)
{
    const double slow = t * (1.0 / b.T - 1.0 / b.T2) - x * (1.0 / b.lambda - 1.0 / b.lambda2);
    const double fast = t * (1.0 / b.T + 1.0 / b.T2) - x * (1.0 / b.lambda + 1.0 / b.lambda2);
    return 2.0 * std::cos(kPi * slow) * std::cos(kPi * fast);
}

BeatVelocities beat_velocities(const BeatSpec& b)
{
    const double sum_k = 1.0 / b.lambda + 1.0 / b.lambda2;
    const double diff_k = 1.0 / b.lambda - 1.0 / b.lambda2;
    if (diff_k == 0.0) {
        throw DomainError("beat: group velocity undefined for equal wavelengths (1/l = 1/l2)");
    }
    BeatVelocities v;
    v.phase = sum_k == 0.0 ? ExtendedReal::infinity()
                           : ExtendedReal((1.0 / b.T + 1.0 / b.T2) / sum_k);
    v.group = (1.0 / b.T - 1.0 / b.T2) / diff_k;
    return v;
}

EnvelopeWindow fast_period_window(const BeatSpec& b, const GridSpec& grid)
{
    auto samples = [](double rate_sum, double spacing) -> std::size_t {
        const double r = std::abs(rate_sum);
        if (r == 0.0) return 1;
        const double period = 2.0 / r;
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(period / spacing)));
    };
    return {samples(1.0 / b.T + 1.0 / b.T2, grid.tau),
            samples(1.0 / b.lambda + 1.0 / b.lambda2, grid.eps)};
}

double measure_group_velocity(const FieldSlab& field, const EnvelopeWindow& window)
{
    const std::size_t nt = field.nt();
    const std::size_t nx = field.nx();
    const std::size_t wt = std::max<std::size_t>(1, window.time_steps);
    const std::size_t wx = std::max<std::size_t>(1, window.space_sites);
    const bool periodic = field.grid().boundary == Boundary::periodic;
    if (2 * wt + 1 > nt || 2 * wx + 1 > nx) {
        throw MeasurementError("envelope: smoothing window does not fit inside the slab");
    }

    // |psi|^2 coarse-grained by two box passes per axis (a triangular kernel
    // of base 2w - 1), which suppresses carrier leakage to second order.
    Plane energy{nt, nx, std::vector<double>(nt * nx)};
    for (std::size_t n = 0; n < nt; ++n) {
        for (std::size_t j = 0; j < nx; ++j) energy.at(n, j) = std::norm(field(n, j));
    }
    Plane env = box_space(box_space(box_time(box_time(energy, wt), wt), wx, periodic), wx, periodic);
    const std::size_t slices = env.rows;
    const std::size_t width = env.cols;
    const auto [lo, hi] = std::minmax_element(env.v.begin(), env.v.end());
    if (!(*hi > 0.0) || (*hi - *lo) <= 1e-9 * *hi) {
        throw MeasurementError("envelope: flat envelope, nothing to track");
    }

    const double center_offset = static_cast<double>(wx - 1);
    const double span = static_cast<double>(nx);

    // Local maxima of one slice above its midline, as refined site positions.
    auto peaks_of = [&](std::size_t s) {
        const double* row = env.v.data() + s * width;
        const auto [rlo, rhi] = std::minmax_element(row, row + width);
        const double midline = 0.5 * (*rlo + *rhi);
        std::vector<double> out;
        const std::size_t first = periodic ? 0 : 2;
        const std::size_t last = periodic ? width : width - 2;
        for (std::size_t i = first; i < last; ++i) {
            const double left = row[(i + width - 1) % width];
            const double mid = row[i];
            const double right = row[(i + 1) % width];
            if (!(mid > left && mid >= right && mid >= midline)) continue;
            const double curvature = left - 2.0 * mid + right;
            const double shift = curvature != 0.0 ? 0.5 * (left - right) / curvature : 0.0;
            out.push_back(static_cast<double>(i) + shift + center_offset);
        }
        return out;
    };

    std::vector<double> times;
    std::vector<double> positions;
    std::optional<double> previous;
    for (std::size_t s = 0; s < slices; ++s) {
        const auto peaks = peaks_of(s);
        if (peaks.empty()) break;
        double spacing = span;
        for (std::size_t k = 1; k < peaks.size(); ++k) {
            spacing = std::min(spacing, peaks[k] - peaks[k - 1]);
        }
        const double target = previous ? *previous : 0.5 * (span - 1.0);
        double best = 0.0;
        double best_distance = std::numeric_limits<double>::infinity();
        for (double p : peaks) {
            double candidate = p;
            if (periodic) {
                // unwrap to the image nearest the target
                candidate += span * std::round((target - p) / span);
            }
            const double d = std::abs(candidate - target);
            if (d < best_distance) {
                best_distance = d;
                best = candidate;
            }
        }
        // A jump of more than a quarter lobe means the lobe left the slab.
        if (previous && best_distance > 0.25 * spacing) break;
        times.push_back((static_cast<double>(s) + static_cast<double>(wt - 1))
                        * field.grid().tau);
        positions.push_back(best * field.grid().eps);
        previous = best;
    }

    if (times.size() < 3) {
        throw MeasurementError("envelope: fewer than three tracked time slices");
    }
    const double count = static_cast<double>(times.size());
    double mt = 0.0;
    double mx = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        mt += times[k];
        mx += positions[k];
    }
    mt /= count;
    mx /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        sxy += (times[k] - mt) * (positions[k] - mx);
        sxx += (times[k] - mt) * (times[k] - mt);
    }
    return sxy / sxx;
}

double measure_group_velocity(const FieldSlab& field, const BeatSpec& b)
{
    return measure_group_velocity(field, fast_period_window(b, field.grid()));
}

}  // namespace latwave::waves
