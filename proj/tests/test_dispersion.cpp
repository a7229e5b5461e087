#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latwave/dispersion.hpp"
#include "latwave/kg_lattice.hpp"
#include "test_support.hpp"

using namespace latwave;
using namespace latwave::dispersion;
using latwave::testing::uniform;
using latwave::testing::uniform_int;

namespace {

const ExtendedIndex kInf = ExtendedIndex::infinity();

double log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("discrete mass spectrum")
{
    GridSpec g;
    CHECK(mass_from_rest_period(1, g) == doctest::Approx(2 * kPi).epsilon(1e-15));

    GridSpec g2;
    g2.tau = 2.0;
    g2.c = 3.0;
    CHECK(mass_from_rest_period(6, g2) == doctest::Approx(0.05817764173314432).epsilon(1e-14));

    for (std::int64_t N = 1; N < 200; ++N) {
        CHECK(mass_from_rest_period(N, g) / mass_from_rest_period(2 * N, g) == 2.0);
    }
    CHECK_THROWS_AS(mass_from_rest_period(0, g), DomainError);
}

TEST_CASE("residual examples")
{
    GridSpec g;
    for (auto form : {DispersionForm::cayley, DispersionForm::exponential, DispersionForm::continuum}) {
        for (std::int64_t N = 3; N < 40; ++N) {
            CHECK(std::abs(dispersion_residual(form, N, ExtendedIndex(N), 0.0, g)) <= 1e-15);
        }
    }
    CHECK(std::abs(dispersion_residual(DispersionForm::cayley, 3, ExtendedIndex(6), 2 * kPi / std::sqrt(12.0), g))
          <= 1e-15);
    CHECK(std::abs(dispersion_residual(DispersionForm::exponential, 4, kInf, 2.0, g)) <= 1e-15);
    CHECK(mass_for_mode(DispersionForm::cayley, 3, ExtendedIndex(6), g)
          == doctest::Approx(1.8137993642342178).epsilon(1e-15));
    CHECK(mass_for_mode(DispersionForm::exponential, 4, kInf, g) == doctest::Approx(2.0).epsilon(1e-15));

    // continuum: w^2/c^2 - k^2 with w = 2 pi/(N tau), k = 2 pi/(M eps)
    GridSpec g3;
    g3.tau = 0.5;
    g3.eps = 0.25;
    g3.c = 2.0;
    const double w = 2 * kPi / (5 * 0.5);
    const double k = 2 * kPi / (7 * 0.25);
    CHECK(dispersion_residual(DispersionForm::continuum, 5, ExtendedIndex(7), 0.3, g3)
          == doctest::Approx(w * w / 4 - k * k - 0.09 * 4).epsilon(1e-14));
}

TEST_CASE("tan(pi/2) modes and spacelike modes")
{
    GridSpec g;
    CHECK(dispersion_residual(DispersionForm::exponential, 2, ExtendedIndex(5), 1.0, g)
          == std::numeric_limits<double>::infinity());
    CHECK(dispersion_residual(DispersionForm::exponential, 5, ExtendedIndex(2), 1.0, g)
          == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(dispersion_residual(DispersionForm::exponential, 2, ExtendedIndex(2), 1.0, g)));
    CHECK_THROWS_AS(mass_for_mode(DispersionForm::exponential, 2, ExtendedIndex(5), g), DomainError);
    CHECK_THROWS_AS(mass_for_mode(DispersionForm::cayley, 7, ExtendedIndex(3), g), DomainError);
    CHECK_THROWS_AS(dispersion_residual(DispersionForm::cayley, 1, kInf, 1.0, g), DomainError);
}

TEST_CASE("printed tan coefficient does not certify the lattice operator")
{
    GridSpec g;
    const double symmetric = mass_for_mode(DispersionForm::exponential, 4, kInf, g);
    const double printed = mass_for_mode(DispersionForm::exponential, 4, kInf, g, TanCoefficient::as_printed);
    CHECK(symmetric == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(printed == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("solve_modes")
{
    GridSpec g;
    SUBCASE("massless light-cone lattice gives the diagonal")
    {
        for (auto form : {DispersionForm::cayley, DispersionForm::continuum}) {
            const auto sols = solve_modes(0.0, form, 20, 20, 1e-12, g);
            REQUIRE(sols.size() == 19);
            for (std::size_t i = 0; i < sols.size(); ++i) {
                CHECK(sols[i].N == static_cast<std::int64_t>(i) + 2);
                CHECK(sols[i].M == ExtendedIndex(sols[i].N));
            }
        }
        // (2, 2) puts tan(pi/2) on both sides of the exponential relation
        const auto exp_sols = solve_modes(0.0, DispersionForm::exponential, 20, 20, 1e-12, g);
        REQUIRE(exp_sols.size() == 18);
        CHECK(exp_sols.front().N == 3);
    }
    SUBCASE("contains (3, 6) for m0 = 2 pi / sqrt 12")
    {
        const auto sols = solve_modes(1.8137993642342178, DispersionForm::cayley, 64, 64, 1e-9, g);
        bool found = false;
        for (const auto& s : sols) found = found || (s.N == 3 && s.M == ExtendedIndex(6));
        CHECK(found);
    }
    SUBCASE("rounded mass misses (3, 6) at tol 1e-9")
    {
        const auto sols = solve_modes(1.8138, DispersionForm::cayley, 64, 64, 1e-9, g);
        for (const auto& s : sols) CHECK_FALSE((s.N == 3 && s.M == ExtendedIndex(6)));
    }
    SUBCASE("enlarging bounds gives a superset, in (N, M) order")
    {
        for (int trial = 0; trial < 10; ++trial) {
            const double m0 = mass_from_rest_period(uniform_int(2, 12), g);
            const auto small = solve_modes(m0, DispersionForm::cayley, 16, 16, 1e-9, g);
            const auto large = solve_modes(m0, DispersionForm::cayley, 32, 40, 1e-9, g);
            for (const auto& s : small) CHECK(std::find(large.begin(), large.end(), s) != large.end());
            for (std::size_t i = 1; i < large.size(); ++i) {
                const bool ordered = large[i - 1].N < large[i].N
                                     || (large[i - 1].N == large[i].N && large[i - 1].M < large[i].M);
                CHECK(ordered);
            }
        }
    }
    SUBCASE("rest solutions carry the spectrum mass")
    {
        for (std::int64_t N = 2; N <= 30; ++N) {
            const double m0 = mass_from_rest_period(N, g);
            const auto sols = solve_modes(m0, DispersionForm::cayley, 30, 30, 1e-9, g);
            bool found = false;
            for (const auto& s : sols) {
                if (s.M.is_infinite()) {
                    CHECK(s.N == N);
                    CHECK(std::abs(s.m0 / mass_from_rest_period(s.N, g) - 1.0) <= 1e-13);
                    found = true;
                }
            }
            CHECK(found);
        }
    }
    SUBCASE("every solution is an exact lattice wave")
    {
        struct Case {
            DispersionForm form;
            waves::WaveForm wave;
            double m0;
        };
        for (const Case& c : {Case{DispersionForm::cayley, waves::WaveForm::cayley, 1.8137993642342178},
                              Case{DispersionForm::cayley, waves::WaveForm::cayley, 2 * kPi / 5},
                              Case{DispersionForm::exponential, waves::WaveForm::exponential, 2.0},
                              Case{DispersionForm::exponential, waves::WaveForm::exponential, 0.0}}) {
            const auto sols = solve_modes(c.m0, c.form, 24, 24, 1e-10, g);
            CHECK_FALSE(sols.empty());
            for (const auto& s : sols) {
                const waves::WaveSpec spec{c.wave, s.N, s.M, {1.0, 0.0}};
                CHECK(kg::plane_wave_residual(spec, {s.m0, g}, 16) <= 1e-10);
            }
        }
    }
}

TEST_CASE("exponential relation approaches the continuum as 1/s^2")
{
    GridSpec g;
    g.tau = 0.7;
    g.eps = 1.3;
    g.c = 1.1;
    for (auto [N, M] : {std::pair<std::int64_t, std::int64_t>{3, 5}, {2, 3}, {5, 4}}) {
        std::vector<double> scales;
        std::vector<double> gaps;
        for (std::int64_t s : {4, 8, 16, 32}) {
            const double w = 2 * kPi / (static_cast<double>(s * N) * g.tau);
            const double k = 2 * kPi / (static_cast<double>(s * M) * g.eps);
            const double scale = w * w / (g.c * g.c) + k * k;
            const double gap = dispersion_residual(DispersionForm::exponential, s * N, ExtendedIndex(s * M), 0.4, g)
                               - dispersion_residual(DispersionForm::continuum, s * N, ExtendedIndex(s * M), 0.4, g);
            scales.push_back(static_cast<double>(s));
            gaps.push_back(std::abs(gap) / scale);
        }
        CHECK(std::abs(log_slope(scales, gaps) + 2.0) <= 0.1);
    }
}

TEST_CASE("quantization check")
{
    GridSpec g;
    const auto rest = quantization_check({1, {0, 0, 0}}, 2 * kPi, g, 1e-12);
    REQUIRE(rest.N_real.is_finite());
    CHECK(rest.N_real.value() == 1.0);
    CHECK(rest.N == std::optional<std::int64_t>(1));
    CHECK(rest.M_real.is_infinite());
    CHECK(rest.M == std::optional<ExtendedIndex>(kInf));

    const auto irr = quantization_check({1, {0, 0, 0}}, std::sqrt(2.0) * 2 * kPi, g, 1e-6);
    CHECK_FALSE(irr.N.has_value());
    CHECK(irr.N_real.value() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));

    // step (5, 3): E = 5 m0 / 4, p = 3 m0 / 4; with m0 = 2 pi: N = 4/5, M = 4/3
    const auto moving = quantization_check({5, {3, 0, 0}}, 2 * kPi, g, 1e-9);
    CHECK(moving.N_real.value() == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(moving.M_real.value() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK_FALSE(moving.N.has_value());
    CHECK_FALSE(moving.M.has_value());

    // N_real = h/(tau E): integer for m0 = 2 pi / (5 N0 / 4)
    const auto integral = quantization_check({5, {3, 0, 0}}, 2 * kPi * 4 / (5 * 3.0), g, 1e-9);
    CHECK(integral.N == std::optional<std::int64_t>(3));
    CHECK(integral.M == std::optional<ExtendedIndex>(ExtendedIndex(5)));

    CHECK_THROWS_AS(quantization_check({2, {2, 0, 0}}, 1.0, g, 1e-9), DomainError);
    CHECK_THROWS_AS(quantization_check({1, {3, 0, 0}}, 1.0, g, 1e-9), DomainError);
}

TEST_CASE("dispersion form names")
{
    CHECK(std::string(to_string(DispersionForm::cayley)) == "cayley");
    CHECK(std::string(to_string(DispersionForm::exponential)) == "exponential");
    CHECK(std::string(to_string(DispersionForm::continuum)) == "continuum");
}
