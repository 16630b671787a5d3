#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace oscmult {

// Exact rational on int64 with 128-bit intermediates. Arithmetic throws
// std::overflow_error instead of wrapping; comparisons never overflow.
class Rational {
public:
    Rational() = default;

    Rational(std::int64_t num, std::int64_t den = 1) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        num_ = num;
        den_ = den;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    static Rational from_i128(__int128 num, __int128 den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num;
        __int128 b = den;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        if (!fits(num) || !fits(den)) throw std::overflow_error("Rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_i128(static_cast<__int128>(a.num_) * b.den_ +
                             static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_i128(static_cast<__int128>(a.num_) * b.den_ -
                             static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(static_cast<__int128>(a.num_) * b.num_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return from_i128(static_cast<__int128>(a.num_) * b.den_,
                         static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <
               static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static bool fits(__int128 v) {
        return v >= static_cast<__int128>(INT64_MIN) && v <= static_cast<__int128>(INT64_MAX);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX || p < INT64_MIN) throw std::overflow_error("int64 multiply overflow");
    return static_cast<std::int64_t>(p);
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / std::gcd(a, b), b);
}

// lcm of all integers in [lo, hi]; throws on int64 overflow.
inline std::int64_t lcm_range(std::int64_t lo, std::int64_t hi) {
    std::int64_t acc = 1;
    for (std::int64_t q = lo; q <= hi; ++q) acc = checked_lcm(acc, q);
    return acc;
}

// 2^e as int64, e in [0, 62].
inline std::int64_t pow2i(int e) {
    if (e < 0 || e > 62) throw std::overflow_error("pow2i: exponent out of range");
    return std::int64_t{1} << e;
}

// Exact dyadic rational 2^e for any int e (negative allowed).
inline Rational dyadic_pow2(int e) {
    return e >= 0 ? Rational(pow2i(e)) : Rational(1, pow2i(-e));
}

} // namespace oscmult
