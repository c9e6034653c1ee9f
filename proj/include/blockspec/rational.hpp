#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "blockspec/errors.hpp"

namespace blockspec {

/// Exact rational on 64-bit integers with 128-bit intermediates.
/// Wide enough for the combinatorial sums used here (binomials up to C(50,25)
/// and denominators up to 4^25); anything larger throws instead of wrapping.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) {
        if (den_ == 0) throw Error("rational: zero denominator");
        normalize();
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator+(const Rational& o) const {
        __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
        __int128 d = (__int128)den_ * o.den_;
        return from_wide(n, d);
    }
    Rational operator-(const Rational& o) const {
        __int128 n = (__int128)num_ * o.den_ - (__int128)o.num_ * den_;
        __int128 d = (__int128)den_ * o.den_;
        return from_wide(n, d);
    }
    Rational operator*(const Rational& o) const {
        return from_wide((__int128)num_ * o.num_, (__int128)den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw Error("rational: division by zero");
        return from_wide((__int128)num_ * o.den_, (__int128)den_ * o.num_);
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd_wide(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw Error("rational: 64-bit overflow after reduction");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static __int128 gcd_wide(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    long long num_;
    long long den_;
};

/// Exact binomial coefficient as a 64-bit integer. Valid for n <= 62 (C(62,31)
/// still fits); throws beyond that.
inline long long binomial_exact(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 62) throw Error("binomial_exact: n > 62 would overflow 64 bits");
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * (unsigned)(n - k + i) / (unsigned)i;
    }
    return static_cast<long long>(acc);
}

/// 2^k as an exact integer, k <= 62.
inline long long pow2_exact(int k) {
    if (k < 0 || k > 62) throw Error("pow2_exact: exponent out of range");
    return 1LL << k;
}

} // namespace blockspec
