#pragma once
// Exact rational scalars (GMP) and small factorial/binomial helpers.

#include <gmpxx.h>
#include <string>

namespace bk {

using Q = mpq_class;

inline Q qfact(long n) {
    Q r = 1;
    for (long k = 2; k <= n; ++k) r *= k;
    return r;
}

// Generalized binomial: falling(x, k) / k!.  Defined for any integer x
// (negative allowed); k < 0 yields 0.
inline Q qbinom(long x, long k) {
    if (k < 0) return 0;
    Q r = 1;
    for (long j = 0; j < k; ++j) {
        r *= (x - j);
        r /= (j + 1);
    }
    return r;
}

// Exact square root of a nonnegative rational if it is a perfect square.
inline bool sqrt_exact(const Q& v, Q& out) {
    if (v < 0) return false;
    mpz_class num = v.get_num(), den = v.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    out = Q(sn) / Q(sd);
    return true;
}

// Canonical text form "p/q" (plain "p" when q = 1).
inline std::string qstr(const Q& v) { return v.get_str(); }

}  // namespace bk
