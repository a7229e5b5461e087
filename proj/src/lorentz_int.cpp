#include "latwave/lorentz_int.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace latwave::lorentz {
namespace {

constexpr std::array<int, 4> kEta{1, -1, -1, -1};

IntMatrix4 eta_matrix() { return IntMatrix4::diagonal(1, -1, -1, -1); }

IntMatrix4 raw_generator(Letter letter)
{
    switch (letter) {
        case Letter::S1:
            return IntMatrix4::from_rows({{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}});
        case Letter::S2:
            return IntMatrix4::from_rows({{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}});
        case Letter::S3: return IntMatrix4::diagonal(1, 1, 1, -1);
        case Letter::S4:
            return IntMatrix4::from_rows(
                {{{2, 1, 1, 1}, {-1, 0, -1, -1}, {-1, -1, 0, -1}, {-1, -1, -1, 0}}});
        case Letter::P1: return IntMatrix4::diagonal(1, -1, 1, 1);
        case Letter::P2: return IntMatrix4::diagonal(1, 1, -1, 1);
        case Letter::P3: return IntMatrix4::diagonal(1, 1, 1, -1);
    }
    throw DomainError("unknown generator letter");
}

// Parity blocks P1^a P2^b P3^c in lexicographic word order.
const std::vector<GeneratorWord>& parity_blocks()
{
    static const std::vector<GeneratorWord> blocks = {
        {},
        {Letter::P1},
        {Letter::P1, Letter::P2},
        {Letter::P1, Letter::P2, Letter::P3},
        {Letter::P1, Letter::P3},
        {Letter::P2},
        {Letter::P2, Letter::P3},
        {Letter::P3},
    };
    return blocks;
}

// The 48 signed permutations, each as parity block + permutation word.
const std::map<IntMatrix4, GeneratorWord>& signed_permutation_table()
{
    static const std::map<IntMatrix4, GeneratorWord> table = [] {
        const std::vector<GeneratorWord> permutations = {
            {},
            {Letter::S1},
            {Letter::S1, Letter::S2},
            {Letter::S1, Letter::S2, Letter::S1},
            {Letter::S2},
            {Letter::S2, Letter::S1},
        };
        std::map<IntMatrix4, GeneratorWord> t;
        for (const auto& parity : parity_blocks()) {
            for (const auto& perm : permutations) {
                GeneratorWord w = parity;
                w.insert(w.end(), perm.begin(), perm.end());
                t.emplace(eval_word(w).matrix(), std::move(w));
            }
        }
        if (t.size() != 48) throw InternalInvariantError("signed permutation table is not 48 elements");
        return t;
    }();
    return table;
}

void append(GeneratorWord& into, const GeneratorWord& from)
{
    into.insert(into.end(), from.begin(), from.end());
}

}  // namespace

IntMatrix4 IntMatrix4::identity() { return diagonal(1, 1, 1, 1); }

IntMatrix4 IntMatrix4::diagonal(int a, int b, int c, int d)
{
    IntMatrix4 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

IntMatrix4 IntMatrix4::from_rows(const std::array<std::array<long long, 4>, 4>& rows)
{
    IntMatrix4 m;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return m;
}

IntMatrix4 IntMatrix4::transpose() const
{
    IntMatrix4 t;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
}

IntMatrix4 operator*(const IntMatrix4& a, const IntMatrix4& b)
{
    IntMatrix4 out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            BigInt acc = 0;
            for (int k = 0; k < 4; ++k) {
                if (!a(r, k).is_zero() && !b(k, c).is_zero()) acc += a(r, k) * b(k, c);
            }
            out(r, c) = std::move(acc);
        }
    }
    return out;
}

IntMatrix4 minkowski_gram(const IntMatrix4& m)
{
    IntMatrix4 g;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            BigInt acc = 0;
            for (int k = 0; k < 4; ++k) acc += kEta[static_cast<std::size_t>(k)] * m(k, a) * m(k, b);
            g(a, b) = std::move(acc);
        }
    }
    return g;
}

bool preserves_metric(const IntMatrix4& m) { return minkowski_gram(m) == eta_matrix(); }

BigInt determinant(const IntMatrix4& m)
{
    auto minor3 = [&](int skip_col) {
        std::array<int, 3> cols{};
        for (int c = 0, k = 0; c < 4; ++c) {
            if (c != skip_col) cols[static_cast<std::size_t>(k++)] = c;
        }
        auto e = [&](int r, int k) -> const BigInt& { return m(r, cols[static_cast<std::size_t>(k)]); };
        return e(1, 0) * (e(2, 1) * e(3, 2) - e(2, 2) * e(3, 1))
               - e(1, 1) * (e(2, 0) * e(3, 2) - e(2, 2) * e(3, 0))
               + e(1, 2) * (e(2, 0) * e(3, 1) - e(2, 1) * e(3, 0));
    };
    BigInt det = 0;
    for (int c = 0; c < 4; ++c) {
        const BigInt term = m(0, c) * minor3(c);
        if (c % 2 == 0) {
            det += term;
        } else {
            det -= term;
        }
    }
    return det;
}

IntLorentzMatrix::IntLorentzMatrix(IntMatrix4 m) : m_(std::move(m))
{
    if (!preserves_metric(m_)) {
        throw DomainError("integral Lorentz matrix must satisfy L^T eta L = eta");
    }
}

IntLorentzMatrix IntLorentzMatrix::identity() { return {IntMatrix4::identity(), Trusted{}}; }

IntLorentzMatrix IntLorentzMatrix::inverse() const
{
    const IntMatrix4 eta = eta_matrix();
    return {eta * m_.transpose() * eta, Trusted{}};
}

IntLorentzMatrix operator*(const IntLorentzMatrix& a, const IntLorentzMatrix& b)
{
    // The group is closed under products; no re-certification needed.
    return {a.m_ * b.m_, IntLorentzMatrix::Trusted{}};
}

std::string_view to_string(Letter letter)
{
    switch (letter) {
        case Letter::S1: return "S1";
        case Letter::S2: return "S2";
        case Letter::S3: return "S3";
        case Letter::S4: return "S4";
        case Letter::P1: return "P1";
        case Letter::P2: return "P2";
        case Letter::P3: return "P3";
    }
    return "?";
}

Letter letter_from_string(std::string_view name)
{
    for (Letter l : {Letter::S1, Letter::S2, Letter::S3, Letter::S4, Letter::P1, Letter::P2, Letter::P3}) {
        if (to_string(l) == name) return l;
    }
    throw DomainError("unknown generator name: " + std::string(name));
}

IntLorentzMatrix generator(Letter letter) { return IntLorentzMatrix(raw_generator(letter)); }

IntLorentzMatrix generator(std::string_view name) { return generator(letter_from_string(name)); }

IntMatrix4 printed_s4()
{
    IntMatrix4 m = raw_generator(Letter::S4);
    m(2, 3) = 1;
    return m;
}

ParityProducts parity_products()
{
    using enum Letter;
    return {eval_word({S1, S2, S3, S2, S1}), eval_word({S2, S3, S2}), eval_word({S3})};
}

IntLorentzMatrix eval_word(const GeneratorWord& word)
{
    IntLorentzMatrix out = IntLorentzMatrix::identity();
    for (Letter l : word) out = out * generator(l);
    return out;
}

std::vector<IntLorentzMatrix> enumerate_ball(int max_word_len)
{
    if (max_word_len < 0) throw DomainError("enumerate_ball: word length must be >= 0");
    if (max_word_len > kMaxBallWordLength) {
        throw DomainError("enumerate_ball: word length exceeds the configured safety bound "
                          + std::to_string(kMaxBallWordLength));
    }
    const std::array<IntLorentzMatrix, 4> gens{generator(Letter::S1), generator(Letter::S2),
                                               generator(Letter::S3), generator(Letter::S4)};
    std::set<IntLorentzMatrix> seen{IntLorentzMatrix::identity()};
    std::vector<IntLorentzMatrix> frontier{IntLorentzMatrix::identity()};
    for (int len = 1; len <= max_word_len; ++len) {
        std::vector<IntLorentzMatrix> next;
        for (const auto& m : frontier) {
            for (const auto& g : gens) {
                IntLorentzMatrix candidate = m * g;
                if (seen.insert(candidate).second) next.push_back(std::move(candidate));
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

GeneratorWord factorize(const IntLorentzMatrix& L)
{
    if (!L.is_orthochronous()) {
        throw DomainError("factorize: only orthochronous elements (L[0][0] >= 1) are words in S1..S4");
    }
    const IntLorentzMatrix s4 = generator(Letter::S4);
    GeneratorWord word;
    IntLorentzMatrix current = L;
    const BigInt start = L(0, 0);
    BigInt steps = 0;

    // current = Q S4 next  <=>  next = S4 Q current (both factors are involutions)
    while (current(0, 0) > 1) {
        bool reduced = false;
        for (const auto& block : parity_blocks()) {
            IntLorentzMatrix next = s4 * eval_word(block) * current;
            if (next(0, 0) < current(0, 0)) {
                append(word, block);
                word.push_back(Letter::S4);
                current = std::move(next);
                reduced = true;
                break;
            }
        }
        if (!reduced || current(0, 0) < 1 || ++steps > start) {
            throw InternalInvariantError("factorize: S4 reduction failed to decrease L[0][0]");
        }
    }

    const auto& table = signed_permutation_table();
    const auto it = table.find(current.matrix());
    if (it == table.end()) {
        throw InternalInvariantError("factorize: remainder with L[0][0] = 1 is not a signed permutation");
    }
    append(word, it->second);
    return word;
}

IntVector4 act(const IntLorentzMatrix& L, const IntVector4& v)
{
    IntVector4 out{};
    for (int r = 0; r < 4; ++r) {
        BigInt acc = 0;
        for (int k = 0; k < 4; ++k) acc += L(r, k) * v[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(r)] = std::move(acc);
    }
    return out;
}

BigInt minkowski_square(const IntVector4& v)
{
    return v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3];
}

}  // namespace latwave::lorentz
