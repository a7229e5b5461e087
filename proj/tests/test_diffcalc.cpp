#include "doctest.h"

#include <cmath>

#include "latwave/diffcalc.hpp"
#include "test_support.hpp"

using namespace latwave;
using namespace latwave::diffcalc;
using latwave::testing::random_values;
using latwave::testing::uniform_int;

namespace {

SampledSequence seq(std::vector<Complex> v, Boundary b = Boundary::shrinking) { return {std::move(v), b}; }

double max_abs_diff(const SampledSequence& a, const SampledSequence& b)
{
    REQUIRE(a.values.size() == b.values.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("forward difference by hand")
{
    const auto d = forward_diff(seq({1.0, 3.0, 6.0}));
    REQUIRE(d.values.size() == 2);
    CHECK(d.values[0] == Complex(2.0));
    CHECK(d.values[1] == Complex(3.0));

    const auto z = forward_diff(seq({4.0, 4.0, 4.0}));
    CHECK(z.values == std::vector<Complex>{0.0, 0.0});
}

TEST_CASE("periodic forward difference wraps")
{
    const Complex i{0.0, 1.0};
    const auto d = forward_diff(seq({1.0, i, -1.0, -i}, Boundary::periodic));
    REQUIRE(d.values.size() == 4);
    CHECK(d.values[0] == i - 1.0);
    CHECK(d.values[1] == -1.0 - i);
    CHECK(d.values[2] == -i + 1.0);
    CHECK(d.values[3] == 1.0 + i);
}

TEST_CASE("backward difference")
{
    const auto d = backward_diff(seq({1.0, 3.0, 6.0}));
    CHECK(d.values == std::vector<Complex>{2.0, 3.0});

    const auto p = backward_diff(seq({0.0, 1.0, 0.0, -1.0}, Boundary::periodic));
    CHECK(p.values == std::vector<Complex>{1.0, 1.0, -1.0, -1.0});
}

TEST_CASE("backward of forward difference is the centered second difference")
{
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = seq(random_values(static_cast<std::size_t>(uniform_int(3, 40))));
        const auto dd = backward_diff(forward_diff(f));
        REQUIRE(dd.values.size() == f.values.size() - 2);
        for (std::size_t i = 0; i < dd.values.size(); ++i) {
            const Complex centered = f.values[i + 2] - 2.0 * f.values[i + 1] + f.values[i];
            CHECK(std::abs(dd.values[i] - centered) <= 1e-14);
        }
    }
}

TEST_CASE("averages")
{
    CHECK(forward_avg(seq({2.0, 4.0})).values == std::vector<Complex>{3.0});
    CHECK(forward_avg(seq({7.5, 7.5, 7.5})).values == std::vector<Complex>{7.5, 7.5});
    CHECK(backward_avg(seq({2.0, 4.0, 8.0})).values == std::vector<Complex>{3.0, 6.0});

    // (f[i+1] + 2 f[i] + f[i-1]) / 4, expanded by hand
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = seq(random_values(static_cast<std::size_t>(uniform_int(3, 40))));
        const auto aa = forward_avg(backward_avg(f));
        for (std::size_t i = 0; i < aa.values.size(); ++i) {
            const Complex expected = 0.25 * (f.values[i + 2] + 2.0 * f.values[i + 1] + f.values[i]);
            CHECK(std::abs(aa.values[i] - expected) <= 1e-15);
        }
    }
}

TEST_CASE("length and boundary errors")
{
    CHECK_THROWS_AS(forward_diff(seq({1.0})), DomainError);
    CHECK_THROWS_AS(backward_avg(seq({}, Boundary::periodic)), DomainError);
    CHECK(forward_diff(seq({1.0, 2.0}, Boundary::periodic)).values.size() == 2);
}

TEST_CASE("product identity: D(fg) = Df Ag + Af Dg")
{
    for (auto boundary : {Boundary::shrinking, Boundary::periodic}) {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = static_cast<std::size_t>(uniform_int(2, 64));
            const auto f = seq(random_values(n), boundary);
            const auto g = seq(random_values(n), boundary);
            const auto lhs = forward_diff(multiply(f, g));
            const auto a = multiply(forward_diff(f), forward_avg(g));
            const auto b = multiply(forward_avg(f), forward_diff(g));
            for (std::size_t i = 0; i < lhs.values.size(); ++i) {
                const Complex rhs = a.values[i] + b.values[i];
                const double scale = std::max(1.0, std::abs(lhs.values[i]));
                CHECK(std::abs(lhs.values[i] - rhs) <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("linearity of all four operators")
{
    const Complex alpha{0.3, -1.7};
    const Complex beta{-2.2, 0.4};
    for (auto op : {DiffOp::forward_diff, DiffOp::backward_diff, DiffOp::forward_avg, DiffOp::backward_avg}) {
        for (auto boundary : {Boundary::shrinking, Boundary::periodic}) {
            const auto f = seq(random_values(17), boundary);
            const auto g = seq(random_values(17), boundary);
            SampledSequence combo{std::vector<Complex>(17), boundary};
            for (std::size_t i = 0; i < 17; ++i) combo.values[i] = alpha * f.values[i] + beta * g.values[i];
            const auto lhs = apply(combo, op);
            const auto of = apply(f, op);
            const auto og = apply(g, op);
            SampledSequence rhs{std::vector<Complex>(lhs.values.size()), boundary};
            for (std::size_t i = 0; i < rhs.values.size(); ++i) {
                rhs.values[i] = alpha * of.values[i] + beta * og.values[i];
            }
            CHECK(max_abs_diff(lhs, rhs) <= 1e-13);
        }
    }
}

TEST_CASE("telescoping: periodic forward differences sum to zero")
{
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = seq(random_values(static_cast<std::size_t>(uniform_int(2, 128))), Boundary::periodic);
        Complex sum{0.0, 0.0};
        for (const auto& z : forward_diff(f).values) sum += z;
        CHECK(std::abs(sum) <= 1e-13);
    }
}

TEST_CASE("apply_1d on slabs")
{
    GridSpec grid;
    grid.boundary = Boundary::shrinking;

    SUBCASE("difference in time of a time-constant field vanishes")
    {
        FieldSlab f(5, 7, grid);
        for (std::size_t n = 0; n < 5; ++n) {
            for (std::size_t j = 0; j < 7; ++j) f(n, j) = Complex(static_cast<double>(j * j), 1.0);
        }
        const auto d = apply_1d(f, Axis::time_n, DiffOp::forward_diff);
        CHECK(d.nt() == 4);
        CHECK(d.nx() == 7);
        CHECK(d.max_abs() == 0.0);
    }

    SUBCASE("average in space of psi = j is j + 1/2")
    {
        FieldSlab f(3, 6, grid);
        for (std::size_t n = 0; n < 3; ++n) {
            for (std::size_t j = 0; j < 6; ++j) f(n, j) = static_cast<double>(j);
        }
        const auto a = apply_1d(f, Axis::space_j, DiffOp::forward_avg);
        REQUIRE(a.nx() == 5);
        for (std::size_t n = 0; n < 3; ++n) {
            for (std::size_t j = 0; j < 5; ++j) CHECK(a(n, j) == Complex(static_cast<double>(j) + 0.5));
        }
    }

    SUBCASE("extent too small")
    {
        FieldSlab f(1, 6, grid);
        CHECK_THROWS_AS(apply_1d(f, Axis::time_n, DiffOp::forward_diff), DomainError);
    }
}

TEST_CASE("separable fields factor through the mixed operator")
{
    // Dn Vn A~j V~j (a[n] b[j]) = (Dn Vn a)[n] (A~j V~j b)[j]
    GridSpec grid;
    grid.boundary = Boundary::shrinking;
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = seq(random_values(9));
        const auto b = seq(random_values(11));
        FieldSlab f(9, 11, grid);
        for (std::size_t n = 0; n < 9; ++n) {
            for (std::size_t j = 0; j < 11; ++j) f(n, j) = a.values[n] * b.values[j];
        }
        auto direct = apply_1d(f, Axis::time_n, DiffOp::backward_diff);
        direct = apply_1d(direct, Axis::time_n, DiffOp::forward_diff);
        direct = apply_1d(direct, Axis::space_j, DiffOp::backward_avg);
        direct = apply_1d(direct, Axis::space_j, DiffOp::forward_avg);

        const auto da = forward_diff(backward_diff(a));
        const auto ab = forward_avg(backward_avg(b));
        REQUIRE(direct.nt() == da.values.size());
        REQUIRE(direct.nx() == ab.values.size());
        for (std::size_t n = 0; n < direct.nt(); ++n) {
            for (std::size_t j = 0; j < direct.nx(); ++j) {
                CHECK(std::abs(direct(n, j) - da.values[n] * ab.values[j]) <= 1e-13);
            }
        }
    }
}

TEST_CASE("time and space operators commute")
{
    for (auto boundary : {Boundary::shrinking, Boundary::periodic}) {
        GridSpec grid;
        grid.boundary = boundary;
        FieldSlab f(12, 15, grid);
        for (auto& z : f.data()) z = latwave::testing::random_complex();
        for (auto op_t : {DiffOp::forward_diff, DiffOp::backward_avg}) {
            for (auto op_x : {DiffOp::backward_diff, DiffOp::forward_avg}) {
                const auto tx = apply_1d(apply_1d(f, Axis::time_n, op_t), Axis::space_j, op_x);
                const auto xt = apply_1d(apply_1d(f, Axis::space_j, op_x), Axis::time_n, op_t);
                CHECK(max_abs_difference(tx, xt) <= 1e-13);
            }
        }
    }
}
