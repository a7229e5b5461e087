#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "latwave/common.hpp"

namespace latwave::testing {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 engine(0x5eed'1a77'1ceULL);
    return engine;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

inline Complex random_complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

inline std::vector<Complex> random_values(std::size_t n)
{
    std::vector<Complex> v(n);
    for (auto& z : v) z = random_complex();
    return v;
}

}  // namespace latwave::testing
