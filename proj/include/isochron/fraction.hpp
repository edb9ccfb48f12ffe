#ifndef ISOCHRON_FRACTION_HPP
#define ISOCHRON_FRACTION_HPP

#include "isochron/poly.hpp"

namespace isochron {

// Exact quotient of two polynomials. No multivariate gcd is attempted; the
// pair is normalized only by the denominator's integer content and sign.
struct PolyFraction {
    ParamPoly num;
    ParamPoly den;

    PolyFraction() = default;
    explicit PolyFraction(ParamPoly n)
        : num(std::move(n)), den(ParamPoly::constant(num.context(), 1)) {}
    PolyFraction(ParamPoly n, ParamPoly d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw ZeroPolynomial("fraction with zero denominator");
        normalize();
    }

    const VarContext& context() const { return num.context(); }
    bool is_zero() const { return num.is_zero(); }
    bool is_polynomial() const {
        Rational c;
        return den.is_rational_constant(c);
    }
    // valid only when is_polynomial()
    ParamPoly as_polynomial() const {
        Rational c;
        if (!den.is_rational_constant(c)) throw VariableContextMismatch("fraction is not a polynomial");
        Rational inv(c.get_den(), c.get_num());
        inv.canonicalize();
        return num.scaled(inv);
    }

    friend PolyFraction operator+(const PolyFraction& a, const PolyFraction& b) {
        return PolyFraction(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend PolyFraction operator-(const PolyFraction& a, const PolyFraction& b) {
        return PolyFraction(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend PolyFraction operator*(const PolyFraction& a, const PolyFraction& b) {
        return PolyFraction(a.num * b.num, a.den * b.den);
    }
    friend PolyFraction operator/(const PolyFraction& a, const PolyFraction& b) {
        if (b.num.is_zero()) throw ZeroPolynomial("division by zero fraction");
        return PolyFraction(a.num * b.den, a.den * b.num);
    }
    PolyFraction operator-() const { return PolyFraction(-num, den); }
    PolyFraction pow(long e) const {
        if (e >= 0) return PolyFraction(num.pow(e), den.pow(e));
        if (num.is_zero()) throw ZeroPolynomial("negative power of zero");
        return PolyFraction(den.pow(-e), num.pow(-e));
    }

    PolyFraction substitute_exact(const std::map<std::string, Binding>& b) const {
        return PolyFraction(num.substitute_exact(b), den.substitute_exact(b));
    }

    std::string to_string() const {
        Rational c;
        if (den.is_rational_constant(c)) return as_polynomial().to_string();
        return "(" + num.to_string() + ")/(" + den.to_string() + ")";
    }

private:
    void normalize() {
        if (num.is_zero()) { den = ParamPoly::constant(num.context(), 1); return; }
        ParamPoly dprim = den.primitive_part();
        // keep the denominator's constant term positive when there is one
        if (sgn(dprim.constant_value()) < 0) dprim = -dprim;
        // scale = den/dprim is rational; fold it into num
        Rational scale = den.leading_coeff() / dprim.leading_coeff();
        Rational inv(scale.get_den(), scale.get_num());
        inv.canonicalize();
        num = num.scaled(inv);
        den = dprim;
    }
};

} // namespace isochron

#endif
