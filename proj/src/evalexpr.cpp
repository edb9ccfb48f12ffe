#include "isochron/evalexpr.hpp"

#include <cmath>

namespace isochron {

namespace {

struct DoubleOps {
    using T = double;
    static bool finite(double v) { return std::isfinite(v); }
    static bool is_zero(double v) { return v == 0.0; }
    static bool is_neg(double v) { return v < 0.0; }
    static double from_rational(const Rational& r) { return rat_to_double(r); }
    static double add(double a, double b) { return a + b; }
    static double sub(double a, double b) { return a - b; }
    static double mul(double a, double b) { return a * b; }
    static double div(double a, double b) { return a / b; }
    static double neg(double a) { return -a; }
    static double sqrt_(double a) { return std::sqrt(a); }
    static double tan_(double a) { return std::tan(a); }
    static double atan_(double a) { return std::atan(a); }
    static double root_pow(double a, long p, unsigned long q) {
        double r = q == 1 ? a : std::pow(a, 1.0 / static_cast<double>(q));
        return std::pow(r, static_cast<double>(p));
    }
};

struct BigOps {
    using T = BigFloat;
    static bool finite(const BigFloat& v) { return v.is_finite(); }
    static bool is_zero(const BigFloat& v) { return v.is_zero(); }
    static bool is_neg(const BigFloat& v) { return v.sign() < 0; }
    static BigFloat from_rational(const Rational& r) { return BigFloat(r); }
    static BigFloat add(const BigFloat& a, const BigFloat& b) { return a + b; }
    static BigFloat sub(const BigFloat& a, const BigFloat& b) { return a - b; }
    static BigFloat mul(const BigFloat& a, const BigFloat& b) { return a * b; }
    static BigFloat div(const BigFloat& a, const BigFloat& b) { return a / b; }
    static BigFloat neg(const BigFloat& a) { return -a; }
    static BigFloat sqrt_(const BigFloat& a) { return a.sqrt(); }
    static BigFloat tan_(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_tan(r.raw(), a.raw(), MPFR_RNDN);
        return r;
    }
    static BigFloat atan_(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_atan(r.raw(), a.raw(), MPFR_RNDN);
        return r;
    }
    static BigFloat root_pow(const BigFloat& a, long p, unsigned long q) {
        return a.pow_rational(p, q);
    }
};

template <class Ops>
EvalResult<typename Ops::T> walk(const EvalExpr::Node* n, const typename Ops::T& x,
                                 const typename Ops::T& y) {
    using R = EvalResult<typename Ops::T>;
    using K = EvalExpr::Kind;
    switch (n->kind) {
        case K::Num: return R::good(Ops::from_rational(n->num));
        case K::Var: return R::good(n->var == 0 ? x : y);
        case K::Neg: {
            auto a = walk<Ops>(n->kids[0].get(), x, y);
            if (!a.ok) return a;
            return R::good(Ops::neg(a.value));
        }
        case K::Add: case K::Sub: case K::Mul: case K::Div: {
            auto a = walk<Ops>(n->kids[0].get(), x, y);
            if (!a.ok) return a;
            auto b = walk<Ops>(n->kids[1].get(), x, y);
            if (!b.ok) return b;
            if (n->kind == K::Div && Ops::is_zero(b.value)) return R::fail("division by zero");
            typename Ops::T v = n->kind == K::Add ? Ops::add(a.value, b.value)
                              : n->kind == K::Sub ? Ops::sub(a.value, b.value)
                              : n->kind == K::Mul ? Ops::mul(a.value, b.value)
                                                  : Ops::div(a.value, b.value);
            if (!Ops::finite(v)) return R::fail("non-finite result");
            return R::good(v);
        }
        case K::Sqrt: {
            auto a = walk<Ops>(n->kids[0].get(), x, y);
            if (!a.ok) return a;
            if (Ops::is_neg(a.value)) return R::fail("sqrt of a negative value");
            return R::good(Ops::sqrt_(a.value));
        }
        case K::Tan: {
            auto a = walk<Ops>(n->kids[0].get(), x, y);
            if (!a.ok) return a;
            typename Ops::T v = Ops::tan_(a.value);
            if (!Ops::finite(v)) return R::fail("tan pole");
            return R::good(v);
        }
        case K::Arctan: {
            auto a = walk<Ops>(n->kids[0].get(), x, y);
            if (!a.ok) return a;
            return R::good(Ops::atan_(a.value));
        }
        case K::Pow: {
            auto a = walk<Ops>(n->kids[0].get(), x, y);
            if (!a.ok) return a;
            if (Ops::is_zero(a.value) && n->pow_p < 0) return R::fail("zero base with negative exponent");
            bool neg_base = Ops::is_neg(a.value);
            typename Ops::T base = a.value;
            bool flip = false;
            if (neg_base && n->pow_q > 1) {
                if (n->pow_q % 2 == 0) return R::fail("even root of a negative value");
                base = Ops::neg(base);          // odd root: pull the sign out
                flip = (n->pow_p % 2) != 0;
            }
            typename Ops::T v = Ops::root_pow(base, n->pow_p, n->pow_q);
            if (flip) v = Ops::neg(v);
            if (!Ops::finite(v)) return R::fail("non-finite power");
            return R::good(v);
        }
    }
    return R::fail("malformed expression tree");
}

} // namespace

EvalResult<double> EvalExpr::eval(double x, double y) const {
    if (!root_) return EvalResult<double>::fail("empty expression");
    return walk<DoubleOps>(root_.get(), x, y);
}

EvalResult<BigFloat> EvalExpr::eval(const BigFloat& x, const BigFloat& y) const {
    if (!root_) return EvalResult<BigFloat>::fail("empty expression");
    return walk<BigOps>(root_.get(), x, y);
}

} // namespace isochron
