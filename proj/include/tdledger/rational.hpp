#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tdledger {

// Exact rational on an int64 numerator/denominator pair. Person-hour and
// percentage arithmetic must not drift ("92.34" stays "92.34"), so everything
// money-like flows through this type; doubles appear only at the parsing edge.
//
// Always normalized: gcd(num, den) == 1, den > 0. Intermediate products run in
// 128 bits; a result that does not fit int64 throws Error.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den);

    // Accepts "181", "-3", "92.34", "67/2". Throws ValidationError on
    // anything else or on values too wide for int64.
    static Rational parse(std::string_view text);
    static std::optional<Rational> try_parse(std::string_view text);
    // Recovers the decimal a human wrote: shortest fixed decimal
    // representation of `value`, parsed exactly (64.2 -> 642/10).
    static Rational from_double_repr(double value);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_integer() const noexcept { return den_ == 1; }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_negative() const noexcept { return num_ < 0; }
    double to_double() const noexcept;

    // Canonical string: exact decimal when the reduced denominator is
    // 2^a * 5^b (no rounding, no trailing zeros), otherwise "num/den".
    std::string to_string() const;
    // Fixed-point rendering with at most `max_frac` fractional digits,
    // rounding half away from zero, trailing zeros trimmed.
    std::string to_decimal(int max_frac = 2) const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace tdledger
