#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace latwave {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an operation's precondition is violated (bad extent,
/// non-timelike step, non-metric matrix, ...). The message names the
/// violated precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an algorithm detects that its own invariant broke.
class InternalInvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/**
 * A value that is either finite or symbolic +infinity.
 *
 * Used for zero wavenumbers (M = infinity), infinite phase velocity of a
 * particle at rest and diverging stencil ratios. Infinity is a tag, never an
 * IEEE overflow.
 */
template <class T>
class Extended {
public:
    constexpr Extended(T value) : value_(value) {}  // NOLINT: implicit by intent

    static constexpr Extended infinity() { return Extended(); }

    [[nodiscard]] constexpr bool is_infinite() const { return !value_.has_value(); }
    [[nodiscard]] constexpr bool is_finite() const { return value_.has_value(); }

    [[nodiscard]] T value() const
    {
        if (!value_) {
            throw DomainError("requested finite value of a symbolic infinity");
        }
        return *value_;
    }

    friend constexpr bool operator==(const Extended&, const Extended&) = default;

    /// Finite values order normally; infinity sorts after every finite value.
    friend constexpr bool operator<(const Extended& a, const Extended& b)
    {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return *a.value_ < *b.value_;
    }

    [[nodiscard]] std::string to_string() const
    {
        if (!value_) return "inf";
        if constexpr (std::is_integral_v<T>) {
            return std::to_string(*value_);
        } else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(*value_));
            return buf;
        }
    }

private:
    constexpr Extended() = default;
    std::optional<T> value_;
};

using ExtendedReal = Extended<double>;
using ExtendedIndex = Extended<std::int64_t>;

/// exp(2*pi*i*num/den) with the argument reduced in integer arithmetic, so
/// multiples of a quarter turn come out exact (0, +-1, +-i).
Complex unit_phase(std::int64_t num, std::int64_t den);

}  // namespace latwave
