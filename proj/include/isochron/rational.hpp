#ifndef ISOCHRON_RATIONAL_HPP
#define ISOCHRON_RATIONAL_HPP

#include <gmpxx.h>
#include <string>
#include <cstdint>

namespace isochron {

// Arbitrary-precision rational. GMP keeps the canonical form we require:
// denominator > 0 and gcd(|num|, den) = 1.
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline Rational rat_from_string(const std::string& s) {
    Rational r(s);
    r.canonicalize();
    return r;
}

inline bool rat_is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool rat_is_one(const Rational& r) { return r == 1; }

// "p/q" with the "/q" part omitted for integers.
inline std::string rat_to_string(const Rational& r) {
    return r.get_str();
}

inline double rat_to_double(const Rational& r) { return r.get_d(); }

// Exact square root if r = (p/q)^2 for a rational p/q >= 0; returns false otherwise.
inline bool rat_exact_sqrt(const Rational& r, Rational& out) {
    if (sgn(r) < 0) return false;
    mpz_class num = r.get_num(), den = r.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    out = Rational(sn, sd);
    out.canonicalize();
    return true;
}

inline Rational rat_pow(const Rational& r, long e) {
    Rational out = 1;
    Rational base = e >= 0 ? r : Rational(r.get_den(), r.get_num());
    if (e < 0) { base.canonicalize(); e = -e; }
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

inline size_t rat_hash(const Rational& r) {
    // cheap FNV over the limbs of num and den
    auto mix = [](size_t h, const mpz_class& z) {
        const mp_limb_t* limbs = mpz_limbs_read(z.get_mpz_t());
        long n = mpz_size(z.get_mpz_t());
        for (long i = 0; i < n; ++i)
            h = (h ^ static_cast<size_t>(limbs[i])) * 1099511628211ULL;
        return h ^ static_cast<size_t>(mpz_sgn(z.get_mpz_t()) + 2);
    };
    size_t h = 1469598103934665603ULL;
    h = mix(h, r.get_num());
    h = mix(h, r.get_den());
    return h;
}

} // namespace isochron

#endif
