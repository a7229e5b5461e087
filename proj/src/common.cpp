#include <algorithm>
#include <cmath>

#include "latwave/common.hpp"
#include "latwave/grid.hpp"

namespace latwave {

Complex unit_phase(std::int64_t num, std::int64_t den)
{
    if (den <= 0) {
        throw DomainError("unit_phase: denominator must be positive");
    }
    // Reduce num/den into [0, 1), then split into quarter turns so that the
    // remaining angle lies in [0, pi/2).
    std::int64_t r = num % den;
    if (r < 0) r += den;
    const __int128 four_r = static_cast<__int128>(4) * r;
    const auto quarter = static_cast<int>(four_r / den);
    const auto rem = static_cast<std::int64_t>(four_r % den);

    double re = 1.0;
    double im = 0.0;
    if (rem != 0) {
        // angle = (pi/2) * rem/den; reflect about pi/4 for symmetric accuracy
        if (2 * rem <= den) {
            const double a = 0.5 * kPi * static_cast<double>(rem) / static_cast<double>(den);
            re = std::cos(a);
            im = std::sin(a);
        } else {
            const double a =
                0.5 * kPi * static_cast<double>(den - rem) / static_cast<double>(den);
            re = std::sin(a);
            im = std::cos(a);
        }
    }
    switch (quarter) {
        case 0: return {re, im};
        case 1: return {-im, re};
        case 2: return {-re, -im};
        default: return {im, -re};
    }
}

void GridSpec::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(tau)) throw DomainError("grid: tau must be positive and finite");
    if (!positive(eps)) throw DomainError("grid: eps must be positive and finite");
    if (!positive(c)) throw DomainError("grid: c must be positive and finite");
    if (!positive(hbar)) throw DomainError("grid: hbar must be positive and finite");
}

FieldSlab::FieldSlab(std::size_t nt, std::size_t nx, GridSpec grid)
    : nt_(nt), nx_(nx), grid_(grid), data_(nt * nx, Complex{0.0, 0.0})
{
    grid_.Nt = nt;
    grid_.Nx = nx;
}

double FieldSlab::max_abs() const
{
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_difference(const FieldSlab& a, const FieldSlab& b)
{
    if (a.nt() != b.nt() || a.nx() != b.nx()) {
        throw DomainError("max_abs_difference: slab shapes differ");
    }
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

}  // namespace latwave
