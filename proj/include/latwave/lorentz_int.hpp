#pragma once

// The integral Lorentz group: 4x4 integer matrices L with L^T eta L = eta,
// eta = diag(1, -1, -1, -1), generated by four reflections
//
//   S1  swaps spatial axes 1 and 2
//   S2  swaps spatial axes 2 and 3
//   S3  flips spatial axis 3
//   S4  the Minkowski reflection in (1, -1, -1, -1):
//         | 2  1  1  1|
//         |-1  0 -1 -1|
//         |-1 -1  0 -1|
//         |-1 -1 -1  0|
//
// and the parity products P1 = S1 S2 S3 S2 S1, P2 = S2 S3 S2, P3 = S3.
// Entries are arbitrary-precision integers.

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "latwave/common.hpp"

namespace latwave::lorentz {

using BigInt = boost::multiprecision::cpp_int;

/// Any 4x4 integer matrix, row-major.
struct IntMatrix4 {
    std::array<BigInt, 16> entries{};

    static IntMatrix4 identity();
    static IntMatrix4 diagonal(int a, int b, int c, int d);
    static IntMatrix4 from_rows(const std::array<std::array<long long, 4>, 4>& rows);

    BigInt& operator()(int r, int c) { return entries[static_cast<std::size_t>(4 * r + c)]; }
    [[nodiscard]] const BigInt& operator()(int r, int c) const
    {
        return entries[static_cast<std::size_t>(4 * r + c)];
    }

    [[nodiscard]] IntMatrix4 transpose() const;

    friend bool operator==(const IntMatrix4& a, const IntMatrix4& b) { return a.entries == b.entries; }
    /// Lexicographic on the 16 row-major entries.
    friend bool operator<(const IntMatrix4& a, const IntMatrix4& b) { return a.entries < b.entries; }
};

IntMatrix4 operator*(const IntMatrix4& a, const IntMatrix4& b);

/// M^T eta M, exactly.
IntMatrix4 minkowski_gram(const IntMatrix4& m);

/// True iff m^T eta m = eta exactly.
bool preserves_metric(const IntMatrix4& m);

BigInt determinant(const IntMatrix4& m);

/// An IntMatrix4 certified to preserve the Minkowski form.
class IntLorentzMatrix {
public:
    /// Throws DomainError if `m` does not preserve the metric.
    explicit IntLorentzMatrix(IntMatrix4 m);

    static IntLorentzMatrix identity();

    [[nodiscard]] const IntMatrix4& matrix() const { return m_; }
    [[nodiscard]] const BigInt& operator()(int r, int c) const { return m_(r, c); }

    /// L[0][0] >= 1: time orientation preserved.
    [[nodiscard]] bool is_orthochronous() const { return m_(0, 0) >= 1; }

    /// eta L^T eta.
    [[nodiscard]] IntLorentzMatrix inverse() const;

    friend IntLorentzMatrix operator*(const IntLorentzMatrix& a, const IntLorentzMatrix& b);
    friend bool operator==(const IntLorentzMatrix& a, const IntLorentzMatrix& b) = default;
    friend bool operator<(const IntLorentzMatrix& a, const IntLorentzMatrix& b) { return a.m_ < b.m_; }

private:
    struct Trusted {};
    IntLorentzMatrix(IntMatrix4 m, Trusted) : m_(std::move(m)) {}
    IntMatrix4 m_;
};

enum class Letter { S1, S2, S3, S4, P1, P2, P3 };

using GeneratorWord = std::vector<Letter>;

std::string_view to_string(Letter letter);
/// Throws DomainError on an unknown name.
Letter letter_from_string(std::string_view name);

/// S1..S4 by letter (S4 is the metric-preserving matrix above).
IntLorentzMatrix generator(Letter letter);
/// Same, looked up by name "S1".."S4" or "P1".."P3".
IntLorentzMatrix generator(std::string_view name);

/// S4 with the third-row, fourth-column entry +1 as typeset in the source
/// table. It fails the metric test: columns 0 and 3 have Minkowski product 2.
IntMatrix4 printed_s4();

struct ParityProducts {
    IntLorentzMatrix P1;
    IntLorentzMatrix P2;
    IntLorentzMatrix P3;
};

ParityProducts parity_products();

/// Left-to-right product of the letters; the empty word is the identity.
IntLorentzMatrix eval_word(const GeneratorWord& word);

/// Maximum word length accepted by enumerate_ball.
inline constexpr int kMaxBallWordLength = 12;

/// All products of at most `max_word_len` letters from {S1, S2, S3, S4},
/// deduplicated and sorted lexicographically by entries.
std::vector<IntLorentzMatrix> enumerate_ball(int max_word_len);

/// Writes L as a word of the form
///   [P-block] S4 [P-block] S4 ... S4 [P-block][permutation]
/// where each P-block is P1^a P2^b P3^c (a, b, c in {0, 1}) and the
/// permutation is a word over {S1, S2} of length <= 3. eval_word of the
/// result equals L exactly. Requires an orthochronous L.
GeneratorWord factorize(const IntLorentzMatrix& L);

using IntVector4 = std::array<BigInt, 4>;

IntVector4 act(const IntLorentzMatrix& L, const IntVector4& v);

/// t^2 - x^2 - y^2 - z^2.
BigInt minkowski_square(const IntVector4& v);

}  // namespace latwave::lorentz
