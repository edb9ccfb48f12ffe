#ifndef ISOCHRON_BIGFLOAT_HPP
#define ISOCHRON_BIGFLOAT_HPP

#include <mpfr.h>
#include <string>
#include <utility>

#include "isochron/rational.hpp"

namespace isochron {

// Correctly rounded multiple-precision float on top of MPFR. Every value
// carries its working precision in bits; binary operations round at the
// larger of the two operand precisions.
class BigFloat {
public:
    static constexpr mpfr_prec_t kDefaultPrec = 256;
    static constexpr mpfr_prec_t kGuardBits = 32;

    BigFloat() { mpfr_init2(v_, kDefaultPrec); mpfr_set_zero(v_, 1); }
    static BigFloat with_prec(mpfr_prec_t prec) {
        BigFloat r;
        mpfr_set_prec(r.v_, prec);
        mpfr_set_zero(r.v_, 1);
        return r;
    }
    BigFloat(double x, mpfr_prec_t prec = kDefaultPrec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    BigFloat(long x, mpfr_prec_t prec = kDefaultPrec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    BigFloat(const Rational& q, mpfr_prec_t prec = kDefaultPrec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return bin(a, b, mpfr_add); }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return bin(a, b, mpfr_sub); }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return bin(a, b, mpfr_mul); }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) { return bin(a, b, mpfr_div); }
    BigFloat operator-() const { BigFloat r = with_prec(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }

    BigFloat abs() const { BigFloat r = with_prec(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat sqrt() const { BigFloat r = with_prec(prec()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat cbrt() const { BigFloat r = with_prec(prec()); mpfr_cbrt(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat pow_si(long e) const { BigFloat r = with_prec(prec()); mpfr_pow_si(r.v_, v_, e, MPFR_RNDN); return r; }
    // x^(p/q): q-th root then p-th power; requires x > 0 unless q is odd.
    BigFloat pow_rational(long p, unsigned long q) const {
        BigFloat root = with_prec(prec());
        mpfr_rootn_ui(root.v_, v_, q, MPFR_RNDN);
        return root.pow_si(p);
    }
    BigFloat round_to(mpfr_prec_t prec) const {
        BigFloat r = with_prec(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    std::string str(int digits = 30) const {
        mpfr_exp_t e;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
        std::string mant(s);
        mpfr_free_str(s);
        std::string sign;
        if (!mant.empty() && mant[0] == '-') { sign = "-"; mant = mant.substr(1); }
        return sign + "0." + mant + "e" + std::to_string(e);
    }

    // |this| < 2^-bits
    bool below_pow2(long bits) const {
        if (is_zero()) return true;
        return mpfr_get_exp(v_) < -bits;
    }
    // |this| < 10^-digits (via exact comparison against the power of ten)
    bool below_pow10(long digits) const {
        BigFloat bound = with_prec(prec());
        mpfr_set_ui(bound.v_, 10, MPFR_RNDN);
        mpfr_pow_si(bound.v_, bound.v_, -digits, MPFR_RNDD);
        return mpfr_cmpabs(v_, bound.v_) < 0;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    using Fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static BigFloat bin(const BigFloat& a, const BigFloat& b, Fn fn) {
        BigFloat r = with_prec(std::max(a.prec(), b.prec()));
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    mpfr_t v_;
};

} // namespace isochron

#endif
