#include "doctest.h"

#include <algorithm>
#include <set>

#include "latwave/lorentz_int.hpp"
#include "test_support.hpp"

using namespace latwave;
using namespace latwave::lorentz;
using latwave::testing::uniform_int;

namespace {

IntMatrix4 rows(std::array<std::array<long long, 4>, 4> r) { return IntMatrix4::from_rows(r); }

std::size_t count_s4(const GeneratorWord& w)
{
    return static_cast<std::size_t>(std::count(w.begin(), w.end(), Letter::S4));
}

}  // namespace

TEST_CASE("generators")
{
    CHECK(generator(Letter::S3).matrix() == IntMatrix4::diagonal(1, 1, 1, -1));
    CHECK(generator("S1").matrix() == rows({{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}}));
    CHECK(generator("S4").matrix()
          == rows({{{2, 1, 1, 1}, {-1, 0, -1, -1}, {-1, -1, 0, -1}, {-1, -1, -1, 0}}}));

    const IntVector4 v{7, 11, 13, 17};
    CHECK(act(generator(Letter::S1), v) == IntVector4{7, 13, 11, 17});
    CHECK(act(generator(Letter::S2), v) == IntVector4{7, 11, 17, 13});

    for (Letter l : {Letter::S1, Letter::S2, Letter::S3, Letter::S4}) {
        const auto g = generator(l);
        CHECK(preserves_metric(g.matrix()));
        CHECK(g * g == IntLorentzMatrix::identity());
        CHECK(abs(determinant(g.matrix())) == 1);
        CHECK(g.is_orthochronous());
    }
    CHECK(determinant(generator(Letter::S4).matrix()) == -1);
    CHECK(act(generator(Letter::S4), {1, 0, 0, 0}) == IntVector4{2, -1, -1, -1});
    CHECK(minkowski_square(IntVector4{2, -1, -1, -1}) == 1);

    CHECK_THROWS_AS(generator("S5"), DomainError);
    CHECK_THROWS_AS(letter_from_string("s1"), DomainError);
}

TEST_CASE("the S4 as typeset fails the metric test")
{
    const IntMatrix4 printed = printed_s4();
    CHECK_FALSE(preserves_metric(printed));
    const IntMatrix4 gram = minkowski_gram(printed);
    CHECK(gram(0, 3) == 2);
    CHECK(gram(3, 0) == 2);
    CHECK(gram == rows({{{1, 0, 0, 2}, {0, -1, 0, 2}, {0, 0, -1, 0}, {2, 2, 0, -1}}}));
    CHECK_THROWS_AS(IntLorentzMatrix{printed}, DomainError);
}

TEST_CASE("preserves_metric")
{
    CHECK(preserves_metric(IntMatrix4::identity()));
    CHECK_FALSE(preserves_metric(IntMatrix4::diagonal(2, 1, 1, 1)));
    CHECK(preserves_metric(IntMatrix4::diagonal(-1, 1, -1, 1)));
}

TEST_CASE("parity products")
{
    const auto p = parity_products();
    CHECK(p.P1.matrix() == IntMatrix4::diagonal(1, -1, 1, 1));
    CHECK(p.P2.matrix() == IntMatrix4::diagonal(1, 1, -1, 1));
    CHECK(p.P3.matrix() == IntMatrix4::diagonal(1, 1, 1, -1));
    CHECK(generator(Letter::P1) == p.P1);
    CHECK(generator(Letter::P2) == p.P2);
    CHECK(generator(Letter::P3) == p.P3);
}

TEST_CASE("eval_word")
{
    CHECK(eval_word({}) == IntLorentzMatrix::identity());
    CHECK(eval_word({Letter::S1, Letter::S1}) == IntLorentzMatrix::identity());
    CHECK(eval_word({Letter::S2, Letter::S3, Letter::S2}) == parity_products().P2);
    // left-to-right: (S1 S2) e3 = S1 e2 = e1
    const auto l = eval_word({Letter::S1, Letter::S2});
    CHECK(act(l, {0, 0, 0, 1}) == IntVector4{0, 1, 0, 0});
}

TEST_CASE("S4 commutes with spatial permutations and has order 2")
{
    const auto s4 = generator(Letter::S4);
    for (Letter l : {Letter::S1, Letter::S2}) CHECK(s4 * generator(l) == generator(l) * s4);
    CHECK(s4 != IntLorentzMatrix::identity());
    CHECK(s4 * s4 == IntLorentzMatrix::identity());
}

TEST_CASE("ball enumeration")
{
    CHECK(enumerate_ball(0) == std::vector<IntLorentzMatrix>{IntLorentzMatrix::identity()});
    CHECK(enumerate_ball(1).size() == 5);

    const std::vector<std::size_t> sizes{1, 5, 14, 31, 60, 106, 176};
    std::vector<IntLorentzMatrix> prev;
    for (int len = 0; len <= 6; ++len) {
        const auto ball = enumerate_ball(len);
        CHECK(ball.size() == sizes[static_cast<std::size_t>(len)]);
        CHECK(std::is_sorted(ball.begin(), ball.end()));
        CHECK(std::adjacent_find(ball.begin(), ball.end()) == ball.end());
        CHECK(std::includes(ball.begin(), ball.end(), prev.begin(), prev.end()));
        prev = ball;
    }

    const auto ball6 = enumerate_ball(6);
    for (const auto& L : ball6) {
        CHECK(preserves_metric(L.matrix()));
        CHECK(L.is_orthochronous());
        CHECK(abs(determinant(L.matrix())) == 1);
        CHECK(std::binary_search(ball6.begin(), ball6.end(), L.inverse()));
        CHECK(L * L.inverse() == IntLorentzMatrix::identity());
    }

    CHECK_THROWS_AS(enumerate_ball(kMaxBallWordLength + 1), DomainError);
    CHECK_THROWS_AS(enumerate_ball(-1), DomainError);
}

TEST_CASE("closure: products of ball(3) lie in ball(6)")
{
    const auto ball3 = enumerate_ball(3);
    const auto ball6 = enumerate_ball(6);
    for (const auto& a : ball3) {
        for (const auto& b : ball3) {
            const auto ab = a * b;
            CHECK(preserves_metric(ab.matrix()));
            CHECK(std::binary_search(ball6.begin(), ball6.end(), ab));
        }
    }
}

TEST_CASE("factorization round trip")
{
    CHECK(factorize(IntLorentzMatrix::identity()).empty());
    for (Letter l : {Letter::S1, Letter::S2, Letter::S3, Letter::S4}) {
        CHECK(eval_word(factorize(generator(l))) == generator(l));
    }
    CHECK(factorize(generator(Letter::S4)) == GeneratorWord{Letter::S4});
    CHECK(factorize(generator(Letter::S1)) == GeneratorWord{Letter::S1});

    for (const auto& L : enumerate_ball(8)) {
        const GeneratorWord w = factorize(L);
        CHECK(eval_word(w) == L);
        // one S4 per unit of reduction at most
        CHECK(count_s4(w) <= static_cast<std::size_t>(L(0, 0)));
        // normal form shape: only parity letters and S4 before the permutation tail
        std::size_t tail = w.size();
        while (tail > 0 && (w[tail - 1] == Letter::S1 || w[tail - 1] == Letter::S2)) --tail;
        CHECK(w.size() - tail <= 3);
        for (std::size_t i = 0; i < tail; ++i) {
            CHECK(w[i] != Letter::S1);
            CHECK(w[i] != Letter::S2);
            CHECK(w[i] != Letter::S3);
        }
    }
}

TEST_CASE("factorization of long random words")
{
    const std::array<Letter, 4> alphabet{Letter::S1, Letter::S2, Letter::S3, Letter::S4};
    for (int trial = 0; trial < 100; ++trial) {
        GeneratorWord w;
        const auto len = uniform_int(10, 60);
        for (int i = 0; i < len; ++i) w.push_back(alphabet[static_cast<std::size_t>(uniform_int(0, 3))]);
        const auto L = eval_word(w);
        CHECK(eval_word(factorize(L)) == L);
    }
}

TEST_CASE("factorize rejects time-reversing elements")
{
    const IntLorentzMatrix T{IntMatrix4::diagonal(-1, 1, 1, 1)};
    CHECK_THROWS_AS(factorize(T), DomainError);
}

TEST_CASE("action preserves the Minkowski square")
{
    const auto ball4 = enumerate_ball(4);
    CHECK(act(IntLorentzMatrix::identity(), {3, -1, 4, 1}) == IntVector4{3, -1, 4, 1});
    for (int trial = 0; trial < 100; ++trial) {
        const auto& L = ball4[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(ball4.size()) - 1))];
        const IntVector4 v{uniform_int(-1000, 1000), uniform_int(-1000, 1000), uniform_int(-1000, 1000),
                           uniform_int(-1000, 1000)};
        CHECK(minkowski_square(act(L, v)) == minkowski_square(v));
    }
}

TEST_CASE("entries grow past 64 bits without overflow")
{
    // (S4 P1 P2 P3)^k grows L[0][0] geometrically
    IntLorentzMatrix L = IntLorentzMatrix::identity();
    const auto step = generator(Letter::S4) * generator(Letter::P1) * generator(Letter::P2) * generator(Letter::P3);
    for (int i = 0; i < 40; ++i) L = L * step;
    CHECK(L(0, 0) > BigInt(std::numeric_limits<std::int64_t>::max()));
    CHECK(preserves_metric(L.matrix()));
    CHECK(eval_word(factorize(L)) == L);
}

TEST_CASE("reduction length is bounded by L[0][0], not by its bit length")
{
    // (S4 P1 P2)^k is parabolic: L[0][0] = 1 + k^2, and each S4 step undoes one factor
    const auto step = generator(Letter::S4) * generator(Letter::P1) * generator(Letter::P2);
    IntLorentzMatrix L = IntLorentzMatrix::identity();
    for (int k = 1; k <= 80; ++k) {
        L = L * step;
        CHECK(L(0, 0) == 1 + k * k);
        const GeneratorWord w = factorize(L);
        CHECK(eval_word(w) == L);
        CHECK(count_s4(w) == static_cast<std::size_t>(k));
    }
}
