#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cassert>
#include <cstdint>

namespace exrec {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Signed dyadic rational num / 2^k. Amplitudes of CZ-breakdown terms are
// exactly of this form, so probabilities stay exact.
struct Dyadic {
    int64_t num = 0;
    int k = 0; // denominator exponent

    Dyadic() = default;
    Dyadic(int64_t n, int kk = 0) : num(n), k(kk) { normalize(); }

    void normalize() {
        if (num == 0) {
            k = 0;
            return;
        }
        while (k > 0 && (num & 1) == 0) {
            num >>= 1;
            k--;
        }
    }

    bool zero() const { return num == 0; }

    Dyadic operator+(const Dyadic &o) const {
        int kk = std::max(k, o.k);
        assert(kk - k < 62 && kk - o.k < 62);
        int64_t a = num << (kk - k);
        int64_t b = o.num << (kk - o.k);
        return Dyadic(a + b, kk);
    }
    Dyadic operator-() const { return Dyadic(-num, k); }
    Dyadic operator*(const Dyadic &o) const {
        assert(__builtin_mul_overflow_p(num, o.num, (int64_t)0) == 0);
        return Dyadic(num * o.num, k + o.k);
    }
    Dyadic half() const { return Dyadic(num, k + 1); }

    bool operator==(const Dyadic &o) const { return num == o.num && k == o.k; }

    Rational to_rational() const {
        Rational r(num);
        r /= Rational(BigInt(1) << k);
        return r;
    }
    // |amplitude|^2 as an exact rational
    Rational square() const {
        Rational r(BigInt(num) * BigInt(num));
        r /= Rational(BigInt(1) << (2 * k));
        return r;
    }
    double to_double() const { return double(num) / double(int64_t(1) << std::min(k, 62)); }
};

} // namespace exrec
