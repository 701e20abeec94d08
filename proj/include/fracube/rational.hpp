#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace fracube {

/// Exact rational with a positive denominator, always in lowest terms.
/// Arithmetic goes through 128-bit intermediates and throws TooLarge if the
/// reduced result does not fit in 64 bits.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "p/q", or "p" when the denominator is 1.
    std::string str() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using RationalPoint = std::array<Rational, 3>;

std::string to_string(const RationalPoint& p);

} // namespace fracube
