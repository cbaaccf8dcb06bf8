#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace subsetlab {

/// Exact rational with a positive denominator, always stored reduced.
/// Intermediate products go through 128-bit arithmetic and overflow of the
/// reduced result raises instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;

    Rational(std::int64_t numerator, std::int64_t denominator) {
        if (denominator == 0) {
            throw std::invalid_argument("rational denominator must be nonzero");
        }
        if (denominator < 0) {
            numerator = -numerator;
            denominator = -denominator;
        }
        const std::int64_t g = std::gcd(numerator, denominator);
        num_ = g ? numerator / g : 0;
        den_ = g ? denominator / g : 1;
    }

    static Rational from_int(std::int64_t value) { return Rational(value, 1); }

    /// Accepts "a/b" or a bare integer "a".
    static Rational parse(std::string_view text) {
        const std::size_t slash = text.find('/');
        if (slash == std::string_view::npos) {
            return Rational(parse_int(text), 1);
        }
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool in_unit_interval() const { return num_ >= 0 && num_ <= den_; }

    /// Always "a/b" with the reduced denominator, e.g. "0/1", "1/1", "3/4".
    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("rational division by zero");
        return make_checked(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
    }

private:
    using i128 = __int128;

    static Rational make_checked(i128 numerator, i128 denominator) {
        if (denominator < 0) {
            numerator = -numerator;
            denominator = -denominator;
        }
        const i128 g = gcd128(numerator < 0 ? -numerator : numerator, denominator);
        if (g) {
            numerator /= g;
            denominator /= g;
        }
        constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
        if (numerator < lo || numerator > hi || denominator > hi) {
            throw std::overflow_error("rational arithmetic overflow");
        }
        Rational r;
        r.num_ = static_cast<std::int64_t>(numerator);
        r.den_ = denominator == 0 ? 1 : static_cast<std::int64_t>(denominator);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b) {
            const i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::int64_t parse_int(std::string_view token) {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
            throw std::invalid_argument("bad rational token \"" + std::string(token) + "\"");
        }
        return value;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// The Farey sequence of the given order: every reduced fraction in [0, 1]
/// with denominator <= max_denominator, ascending.
inline std::vector<Rational> farey_sequence(int max_denominator) {
    if (max_denominator < 1) {
        throw std::invalid_argument("farey order must be at least 1");
    }
    std::vector<Rational> grid;
    // Standard next-term recurrence starting from 0/1, 1/n.
    std::int64_t a = 0, b = 1, c = 1, d = max_denominator;
    grid.emplace_back(a, b);
    while (c <= max_denominator) {
        const std::int64_t k = (max_denominator + b) / d;
        const std::int64_t a2 = k * c - a;
        const std::int64_t b2 = k * d - b;
        a = c;
        b = d;
        c = a2;
        d = b2;
        grid.emplace_back(a, b);
    }
    return grid;
}

}  // namespace subsetlab
