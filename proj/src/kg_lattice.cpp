#include "latwave/kg_lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace latwave::kg {
namespace {

constexpr std::array<double, 3> kSecondDiff{1.0, -2.0, 1.0};
constexpr std::array<double, 3> kDoubleAvg{0.25, 0.5, 0.25};

// 3x3 stencil weights W[dn+1][dj+1] of L.
std::array<std::array<double, 3>, 3> operator_weights(const KGParams& p)
{
    const double a = 1.0 / (p.grid.c * p.grid.c * p.grid.tau * p.grid.tau);
    const double b = 1.0 / (p.grid.eps * p.grid.eps);
    const double mu2 = p.mass_term();
    std::array<std::array<double, 3>, 3> w{};
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t j = 0; j < 3; ++j) {
            w[n][j] = -a * kSecondDiff[n] * kDoubleAvg[j] + b * kSecondDiff[j] * kDoubleAvg[n]
                      - mu2 * kDoubleAvg[n] * kDoubleAvg[j];
        }
    }
    return w;
}

// Row of the Bloch-extended slice: x[j + N] = omega x[j].
struct BlochRow {
    std::span<const Complex> x;
    Complex omega;
    Complex omega_inv;

    Complex operator()(std::ptrdiff_t j) const
    {
        const auto n = static_cast<std::ptrdiff_t>(x.size());
        if (j < 0) return omega_inv * x[static_cast<std::size_t>(j + n)];
        if (j >= n) return omega * x[static_cast<std::size_t>(j - n)];
        return x[static_cast<std::size_t>(j)];
    }
};

}  // namespace

double KGParams::mass_term() const
{
    return m0 * m0 * grid.c * grid.c / (grid.hbar * grid.hbar);
}

void KGParams::validate() const
{
    grid.validate();
    if (!(m0 >= 0.0) || !std::isfinite(mass_term())) {
        throw DomainError("kg: rest mass must be >= 0 with a finite mass term");
    }
}

FieldSlab apply_kg_operator(const FieldSlab& field, const KGParams& params)
{
    params.validate();
    if (field.nt() < 3 || field.nx() < 3) {
        throw DomainError("kg operator: slab needs Nt >= 3 and Nx >= 3");
    }
    const auto w = operator_weights(params);
    const bool periodic = field.grid().boundary == Boundary::periodic;
    const std::size_t nx = field.nx();
    const std::size_t first = periodic ? 0 : 1;
    const std::size_t width = periodic ? nx : nx - 2;

    FieldSlab out(field.nt() - 2, width, field.grid());
    for (std::size_t n = 1; n + 1 < field.nt(); ++n) {
        for (std::size_t i = 0; i < width; ++i) {
            const std::size_t j = i + first;
            Complex acc{0.0, 0.0};
            for (std::size_t dn = 0; dn < 3; ++dn) {
                for (std::size_t dj = 0; dj < 3; ++dj) {
                    const std::size_t jj = (j + nx + dj - 1) % nx;
                    acc += w[dn][dj] * field(n + dn - 1, jj);
                }
            }
            out(n - 1, i) = acc;
        }
    }
    return out;
}

double plane_wave_residual(const waves::WaveSpec& spec, const KGParams& params, std::size_t extent)
{
    if (extent < 8) throw DomainError("plane wave residual: extent must be >= 8");
    GridSpec grid = params.grid;
    grid.boundary = Boundary::shrinking;
    const FieldSlab slab = waves::sample(spec, grid, extent, extent);
    return apply_kg_operator(slab, params).max_abs();
}

ExtendedReal calibrate_time_coefficient(std::int64_t N, std::size_t extent)
{
    if (N < 2) throw DomainError("calibration: N must be >= 2");
    if (extent < 3) throw DomainError("calibration: extent must be >= 3");
    const auto n = static_cast<std::int64_t>(extent / 2);
    const Complex prev = unit_phase(n - 1, N);
    const Complex mid = unit_phase(n, N);
    const Complex next = unit_phase(n + 1, N);
    const Complex second_diff = next - 2.0 * mid + prev;
    const Complex double_avg = 0.25 * (next + 2.0 * mid + prev);
    if (double_avg == Complex{0.0, 0.0}) return ExtendedReal::infinity();
    return ExtendedReal((-second_diff / double_avg).real());
}

CyclicTridiagonal::CyclicTridiagonal(std::vector<Complex> lower, std::vector<Complex> diag,
                                     std::vector<Complex> upper)
    : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper))
{
    const std::size_t n = diag_.size();
    if (n < 3 || lower_.size() != n || upper_.size() != n) {
        throw DomainError("cyclic tridiagonal: need n >= 3 and matching band lengths");
    }
    corner_low_ = lower_[0];       // row 0, column n-1
    corner_high_ = upper_[n - 1];  // row n-1, column 0
    gamma_ = -diag_[0];
    if (gamma_ == Complex{0.0, 0.0}) gamma_ = Complex{1.0, 0.0};
    diag_[0] -= gamma_;
    diag_[n - 1] -= corner_high_ * corner_low_ / gamma_;

    c_prime_.resize(n);
    denom_.resize(n);
    const double scale = std::abs(gamma_) + std::abs(corner_high_) + std::abs(corner_low_);
    for (std::size_t i = 0; i < n; ++i) {
        denom_[i] = i == 0 ? diag_[0] : diag_[i] - lower_[i] * c_prime_[i - 1];
        if (std::abs(denom_[i]) <= 1e-14 * scale) {
            throw DomainError("cyclic tridiagonal: singular system (zero pivot at row "
                              + std::to_string(i) + ")");
        }
        c_prime_[i] = i + 1 < n ? upper_[i] / denom_[i] : Complex{0.0, 0.0};
    }

    std::vector<Complex> u(n, Complex{0.0, 0.0});
    u[0] = gamma_;
    u[n - 1] = corner_high_;
    z_ = thomas(u);
    factor_ = z_[0] + corner_low_ / gamma_ * z_[n - 1];
    if (std::abs(1.0 + factor_) <= 1e-14) {
        throw DomainError("cyclic tridiagonal: singular system (Sherman-Morrison denominator)");
    }
}

std::vector<Complex> CyclicTridiagonal::thomas(std::span<const Complex> rhs) const
{
    const std::size_t n = diag_.size();
    std::vector<Complex> x(n);
    x[0] = rhs[0] / denom_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - lower_[i] * x[i - 1]) / denom_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime_[i] * x[i + 1];
    return x;
}

std::vector<Complex> CyclicTridiagonal::solve(std::span<const Complex> rhs) const
{
    const std::size_t n = diag_.size();
    if (rhs.size() != n) throw DomainError("cyclic tridiagonal: rhs length mismatch");
    std::vector<Complex> y = thomas(rhs);
    const Complex vy = y[0] + corner_low_ / gamma_ * y[n - 1];
    const Complex coeff = vy / (1.0 + factor_);
    for (std::size_t i = 0; i < n; ++i) y[i] -= coeff * z_[i];
    return y;
}

FieldSlab evolve(std::span<const Complex> previous, std::span<const Complex> current,
                 std::size_t steps, const KGParams& params, const EvolveOptions& options)
{
    params.validate();
    const std::size_t nx = current.size();
    if (previous.size() != nx) throw DomainError("evolve: initial slices differ in length");
    if (nx < 3) throw DomainError("evolve: slices need Nx >= 3");

    const double a = 1.0 / (params.grid.c * params.grid.c * params.grid.tau * params.grid.tau);
    const double b = 1.0 / (params.grid.eps * params.grid.eps);
    const double mu2 = params.mass_term();
    // Coefficients of A_j and D_j acting on the slices n+1 (and n-1) and n.
    const double outer_avg = -a - 0.25 * mu2;
    const double outer_diff = 0.25 * b;
    const double inner_avg = 2.0 * a - 0.5 * mu2;
    const double inner_diff = 0.5 * b;

    const Complex omega = std::polar(1.0, options.bloch_phase);
    const Complex omega_inv = std::conj(omega);

    const Complex off = 0.25 * outer_avg + outer_diff;
    const Complex diag = 0.5 * outer_avg - 2.0 * outer_diff;
    std::vector<Complex> lower(nx, off);
    std::vector<Complex> upper(nx, off);
    lower[0] = off * omega_inv;
    upper[nx - 1] = off * omega;
    const CyclicTridiagonal system(lower, std::vector<Complex>(nx, diag), upper);

    // Response to a unit source at site 0; the inverse is Bloch-circulant.
    std::vector<Complex> unit(nx, Complex{0.0, 0.0});
    unit[0] = 1.0;
    const std::vector<Complex> kernel = system.solve(unit);

    GridSpec grid = params.grid;
    grid.boundary = Boundary::periodic;
    FieldSlab out(steps + 2, nx, grid);
    std::copy(previous.begin(), previous.end(), out.row(0).begin());
    std::copy(current.begin(), current.end(), out.row(1).begin());

    std::vector<Complex> rhs(nx);
    for (std::size_t n = 1; n <= steps; ++n) {
        const BlochRow older{out.row(n - 1), omega, omega_inv};
        const BlochRow now{out.row(n), omega, omega_inv};
        for (std::size_t j = 0; j < nx; ++j) {
            const auto jj = static_cast<std::ptrdiff_t>(j);
            const Complex avg_now = 0.25 * (now(jj - 1) + 2.0 * now(jj) + now(jj + 1));
            const Complex diff_now = now(jj - 1) - 2.0 * now(jj) + now(jj + 1);
            const Complex avg_old = 0.25 * (older(jj - 1) + 2.0 * older(jj) + older(jj + 1));
            const Complex diff_old = older(jj - 1) - 2.0 * older(jj) + older(jj + 1);
            rhs[j] = -(inner_avg * avg_now + inner_diff * diff_now)
                     - (outer_avg * avg_old + outer_diff * diff_old);
        }
        // x[j] = sum_m kernel[m] rhs~[j - m], summed in fixed m order.
        const BlochRow source{rhs, omega, omega_inv};
        auto next = out.row(n + 1);
        for (std::size_t j = 0; j < nx; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t m = 0; m < nx; ++m) {
                acc += kernel[m] * source(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(m));
            }
            next[j] = acc;
        }
    }
    return out;
}

}  // namespace latwave::kg
