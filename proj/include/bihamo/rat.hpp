#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace bihamo {

// Exact rational scalar, always in lowest terms with positive denominator.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
    if (d == 0) throw std::domain_error("rat: zero denominator");
    Rat q(n, d);
    q.canonicalize();
    return q;
}

inline Rat rat_parse(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline bool rat_is_zero(const Rat& q) { return sgn(q) == 0; }

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat rat_pow(Rat base, long e) {
    if (e < 0) {
        if (rat_is_zero(base)) throw std::domain_error("rat_pow: zero to negative power");
        base = Rat(1) / base;
        e = -e;
    }
    Rat acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace bihamo
