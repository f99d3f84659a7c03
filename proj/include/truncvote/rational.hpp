#ifndef TRUNCVOTE_RATIONAL_HPP
#define TRUNCVOTE_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace truncvote {

/*
 * Exact rational number over 64-bit integers.
 *
 * Always kept in lowest terms with a positive denominator. Intermediate
 * products are formed in 128 bits; a result that does not fit back into
 * 64 bits raises std::overflow_error instead of wrapping.
 */
class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() noexcept = default;
    constexpr Rational(int_type n) noexcept : num_(n), den_(1) {} // NOLINT: implicit by design of arithmetic types

    Rational(int_type n, int_type d) {
        if (d == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        assign(static_cast<wide>(n), static_cast<wide>(d));
    }

    constexpr int_type num() const noexcept { return num_; }
    constexpr int_type den() const noexcept { return den_; }
    constexpr bool is_integer() const noexcept { return den_ == 1; }
    constexpr bool is_zero() const noexcept { return num_ == 0; }
    constexpr int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == 1 && b.den_ == 1) {
            return from_wide(static_cast<wide>(a.num_) + b.num_, 1);
        }
        return from_wide(static_cast<wide>(a.num_) * b.den_ + static_cast<wide>(b.num_) * a.den_,
                         static_cast<wide>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<wide>(a.num_) * b.num_, static_cast<wide>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) {
            throw std::domain_error("rational division by zero");
        }
        return from_wide(static_cast<wide>(a.num_) * b.den_, static_cast<wide>(a.den_) * b.num_);
    }
    Rational operator-() const {
        if (num_ == std::numeric_limits<int_type>::min()) {
            throw std::overflow_error("rational negation overflow");
        }
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend constexpr bool operator==(const Rational&, const Rational&) noexcept = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        const wide lhs = static_cast<wide>(a.num_) * b.den_;
        const wide rhs = static_cast<wide>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "n" for integers, "n/d" otherwise.
    std::string to_string() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "n", "-n" or "n/d". No decimals.
    static Rational parse(std::string_view text) {
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            return Rational(parse_int(text));
        }
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    using wide = __int128;

    static wide gcd_wide(wide a, wide b) noexcept {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            wide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational from_wide(wide n, wide d) {
        Rational r;
        r.assign(n, d);
        return r;
    }

    void assign(wide n, wide d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            return;
        }
        if (d != 1) {
            const wide g = gcd_wide(n, d);
            n /= g;
            d /= g;
        }
        constexpr wide lo = std::numeric_limits<int_type>::min();
        constexpr wide hi = std::numeric_limits<int_type>::max();
        if (n < lo || n > hi || d > hi) {
            throw std::overflow_error("rational overflow");
        }
        num_ = static_cast<int_type>(n);
        den_ = static_cast<int_type>(d);
    }

    static int_type parse_int(std::string_view s) {
        if (s.empty()) {
            throw std::invalid_argument("empty number");
        }
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) {
            throw std::invalid_argument("malformed number '" + std::string(s) + "'");
        }
        wide v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw std::invalid_argument("malformed number '" + std::string(s) + "'");
            }
            v = v * 10 + (s[i] - '0');
            if (v > static_cast<wide>(std::numeric_limits<int_type>::max())) {
                throw std::out_of_range("number out of range '" + std::string(s) + "'");
            }
        }
        return static_cast<int_type>(neg ? -v : v);
    }

    int_type num_ = 0;
    int_type den_ = 1;
};

} // namespace truncvote

#endif // TRUNCVOTE_RATIONAL_HPP
