#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace wittlift {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

inline bigint pow_bigint(const bigint& base, unsigned long exp) {
    bigint r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

// p-adic valuation of a nonzero integer; caller handles zero.
inline long vp_int(bigint x, long p) {
    if (x == 0) throw std::logic_error("vp_int(0)");
    if (x < 0) x = -x;
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

inline long ceil_div(long a, long b) { return (a + b - 1) / b; }

} // namespace wittlift
