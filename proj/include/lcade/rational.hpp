#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lcade/modmath.hpp"

namespace lcade {

struct RationalOverflow : std::overflow_error {
    RationalOverflow() : std::overflow_error("rational arithmetic overflow") {}
};

/// Exact rational on int64 with gcd reduction after every operation.
/// Intermediate products run in 128-bit; results that do not fit back
/// into int64 throw RationalOverflow so callers can fall back to floats.
class Rational {
public:
    Rational() = default;
    Rational(i64 value) : num_(value), den_(1) {}
    Rational(i64 num, i64 den) : num_(num), den_(den) { normalize(); }

    i64 num() const { return num_; }
    i64 den() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    bool is_zero() const { return num_ == 0; }

    Rational operator+(const Rational& o) const {
        __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
        __int128 d = (__int128)den_ * o.den_;
        return from_i128(n, d);
    }
    Rational operator-(const Rational& o) const {
        __int128 n = (__int128)num_ * o.den_ - (__int128)o.num_ * den_;
        __int128 d = (__int128)den_ * o.den_;
        return from_i128(n, d);
    }
    Rational operator*(const Rational& o) const {
        return from_i128((__int128)num_ * o.num_, (__int128)den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return from_i128((__int128)num_ * o.den_, (__int128)den_ * o.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return (__int128)num_ * o.den_ < (__int128)o.num_ * den_;
    }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parse "n", "n/d", or "-n/d". Throws std::invalid_argument on junk.
    static Rational parse(const std::string& text) {
        std::size_t slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                std::size_t pos = 0;
                i64 n = std::stoll(text, &pos);
                if (pos != text.size()) throw std::invalid_argument(text);
                return Rational(n);
            }
            std::size_t p1 = 0, p2 = 0;
            i64 n = std::stoll(text.substr(0, slash), &p1);
            i64 d = std::stoll(text.substr(slash + 1), &p2);
            if (p1 != slash || p2 != text.size() - slash - 1)
                throw std::invalid_argument(text);
            return Rational(n, d);
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("rational out of range: " + text);
        }
    }

private:
    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw RationalOverflow();
        Rational r;
        r.num_ = (i64)n;
        r.den_ = (i64)d;
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        i64 g = gcd_i64(num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    i64 num_ = 0;
    i64 den_ = 1;
};

}  // namespace lcade
