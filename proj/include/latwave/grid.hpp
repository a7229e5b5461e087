#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "latwave/common.hpp"

namespace latwave {

enum class Boundary {
    periodic,   // indices wrap, operators preserve length
    shrinking,  // each operator application drops one sample
};

/**
 * Fundamental constants of the space-time lattice and the slab extents.
 *
 * Events sit at t = n*tau, x = j*eps. Natural units (tau = eps = c = hbar = 1)
 * put the light cone on the lattice diagonal. Planck's h is always derived
 * from hbar, never stored.
 */
struct GridSpec {
    double tau = 1.0;
    double eps = 1.0;
    double c = 1.0;
    double hbar = 1.0;
    std::size_t Nt = 2;
    std::size_t Nx = 2;
    Boundary boundary = Boundary::periodic;

    [[nodiscard]] double planck() const { return 2.0 * kPi * hbar; }

    /// Throws DomainError unless all constants are positive and finite.
    void validate() const;
};

/// Complex field psi[n][j] over time index n and space index j, row-major.
class FieldSlab {
public:
    FieldSlab() = default;
    FieldSlab(std::size_t nt, std::size_t nx, GridSpec grid);

    [[nodiscard]] std::size_t nt() const { return nt_; }
    [[nodiscard]] std::size_t nx() const { return nx_; }
    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    GridSpec& grid() { return grid_; }

    Complex& operator()(std::size_t n, std::size_t j) { return data_[n * nx_ + j]; }
    const Complex& operator()(std::size_t n, std::size_t j) const { return data_[n * nx_ + j]; }

    std::span<Complex> row(std::size_t n) { return {data_.data() + n * nx_, nx_}; }
    [[nodiscard]] std::span<const Complex> row(std::size_t n) const
    {
        return {data_.data() + n * nx_, nx_};
    }

    std::span<Complex> data() { return data_; }
    [[nodiscard]] std::span<const Complex> data() const { return data_; }

    /// Largest |psi| over the slab (0 for an empty slab).
    [[nodiscard]] double max_abs() const;

private:
    std::size_t nt_ = 0;
    std::size_t nx_ = 0;
    GridSpec grid_{};
    std::vector<Complex> data_;
};

/// max |a - b| over two slabs of identical shape.
double max_abs_difference(const FieldSlab& a, const FieldSlab& b);

}  // namespace latwave
