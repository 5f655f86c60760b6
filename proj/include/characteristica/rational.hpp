#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace characteristica {

// Exact rational arithmetic on int64 numerator/denominator, normalized so that
// den > 0 and gcd(num, den) == 1. Intermediate products go through __int128;
// anything that cannot be represented back in int64 throws. Expression trees
// carry only these (never floating-point literals), so structural identity of
// constants is exact.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }
    [[nodiscard]] bool is_zero() const { return num_ == 0; }
    [[nodiscard]] bool is_one() const { return num_ == 1 && den_ == 1; }
    [[nodiscard]] bool negative() const { return num_ < 0; }
    [[nodiscard]] double value() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return make(-i128(num_), i128(den_)); }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }

    // Integer power; exponent may be negative when *this is nonzero.
    [[nodiscard]] Rational pow_int(std::int64_t e) const {
        if (e == 0) return Rational(1);
        Rational base = *this;
        if (e < 0) {
            if (num_ == 0) throw std::domain_error("zero to a negative power");
            base = Rational(den_, num_);
            e = -e;
        }
        Rational acc(1);
        while (e > 0) {
            if (e & 1) acc *= base;
            base = (e > 1) ? base * base : base;
            e >>= 1;
        }
        return acc;
    }

    // Exact square root if both numerator and denominator are perfect squares.
    [[nodiscard]] bool sqrt_exact(Rational& out) const {
        if (num_ < 0) return false;
        std::int64_t rn = isqrt64(num_), rd = isqrt64(den_);
        if (rn < 0 || rd < 0) return false;
        out = Rational(rn, rd);
        return true;
    }

    [[nodiscard]] std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;

    static Rational make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }

    // Exact integer square root; -1 when not a perfect square.
    static std::int64_t isqrt64(std::int64_t v) {
        if (v < 0) return -1;
        auto r = static_cast<i128>(std::sqrt(static_cast<double>(v)));
        while (r > 0 && r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r * r == v ? static_cast<std::int64_t>(r) : -1;
    }

    void normalize() { *this = make(num_, den_); }

    std::int64_t num_, den_;
};

}  // namespace characteristica
