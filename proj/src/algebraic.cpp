#include "isochron/algebraic.hpp"

#include <map>

namespace isochron {

namespace {

BigFloat poly_eval(const std::vector<Rational>& c, const BigFloat& x) {
    BigFloat acc = BigFloat::with_prec(x.prec());
    for (size_t i = c.size(); i-- > 0;) {
        acc = acc * x + BigFloat(c[i], x.prec());
    }
    return acc;
}

BigFloat poly_eval_deriv(const std::vector<Rational>& c, const BigFloat& x) {
    BigFloat acc = BigFloat::with_prec(x.prec());
    for (size_t i = c.size(); i-- > 1;) {
        acc = acc * x + BigFloat(c[i] * Rational(static_cast<long>(i)), x.prec());
    }
    return acc;
}

} // namespace

BigFloat AlgebraicConstant::evaluate(mpfr_prec_t prec) const {
    const mpfr_prec_t work = prec + BigFloat::kGuardBits;
    // bisect a little to stabilize, then Newton
    BigFloat lo(lo_, work), hi(hi_, work);
    int slo = poly_eval(coeffs_, lo).sign();
    for (int i = 0; i < 48; ++i) {
        BigFloat mid = (lo + hi) * BigFloat(0.5, work);
        if (poly_eval(coeffs_, mid).sign() == slo) lo = mid;
        else hi = mid;
    }
    BigFloat x = (lo + hi) * BigFloat(0.5, work);
    for (int i = 0; i < 64; ++i) {
        BigFloat fx = poly_eval(coeffs_, x);
        if (fx.below_pow2(work - 8)) break;
        x = x - fx / poly_eval_deriv(coeffs_, x);
    }
    return x.round_to(prec);
}

BigFloat AlgebraicConstant::defining_residual(const BigFloat& at) const {
    return poly_eval(coeffs_, at).abs();
}

BigFloat AlgebraicConstant::evaluate_radical(mpfr_prec_t prec) const {
    if (!radical_) throw EngineError("UsageError", "constant " + id_ + " has no radical form");
    return radical_(prec + BigFloat::kGuardBits).round_to(prec);
}

const AlgebraicConstant& AlgebraicConstant::lookup(const std::string& id) {
    static const std::map<std::string, AlgebraicConstant> table = [] {
        std::map<std::string, AlgebraicConstant> t;
        // only real root of 27 s^3 - 47 s^2 + 13 s - 1
        t.emplace("Z-cubic",
                  AlgebraicConstant(
                      "Z-cubic", {Rational(-1), Rational(13), Rational(-47), Rational(27)}, 1.0, 2.0,
                      [](mpfr_prec_t p) {
                          // (1/81) C + (1156/81)/C + 47/81 with C = cbrt(39428 + 324 sqrt(93))
                          BigFloat C = (BigFloat(39428L, p) + BigFloat(324L, p) * BigFloat(93L, p).sqrt()).cbrt();
                          return (C + BigFloat(1156L, p) / C + BigFloat(47L, p)) / BigFloat(81L, p);
                      }));
        t.emplace("sqrt33", AlgebraicConstant("sqrt33", {Rational(-33), Rational(0), Rational(1)},
                                              5.0, 6.0,
                                              [](mpfr_prec_t p) { return BigFloat(33L, p).sqrt(); }));
        t.emplace("sqrt3297",
                  AlgebraicConstant("sqrt3297", {Rational(-3297), Rational(0), Rational(1)}, 57.0,
                                    58.0, [](mpfr_prec_t p) { return BigFloat(3297L, p).sqrt(); }));
        // w = cbrt(22868 + 468 sqrt(3297)): w^6 - 45736 w^3 - 199176704 = 0
        t.emplace("t-cbrt",
                  AlgebraicConstant(
                      "t-cbrt",
                      {Rational(-199176704), Rational(0), Rational(0), Rational(-45736),
                       Rational(0), Rational(0), Rational(1)},
                      36.0, 38.0,
                      [](mpfr_prec_t p) {
                          return (BigFloat(22868L, p) + BigFloat(468L, p) * BigFloat(3297L, p).sqrt()).cbrt();
                      }));
        return t;
    }();
    auto it = table.find(id);
    if (it == table.end()) throw UnknownFamily("unknown algebraic constant: " + id);
    return it->second;
}

std::vector<std::string> AlgebraicConstant::known_ids() {
    return {"Z-cubic", "sqrt33", "sqrt3297", "t-cbrt"};
}

} // namespace isochron
