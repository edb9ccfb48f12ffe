#include "isochron/series.hpp"

#include <algorithm>
#include <sstream>

namespace isochron {

TruncatedSeries TruncatedSeries::constant(const VarContext& ctx, const std::string& var,
                                          int order, const Rational& c) {
    TruncatedSeries s(ctx, var, order);
    if (order > 0) s.c_[0] = ParamPoly::constant(ctx, c);
    return s;
}

TruncatedSeries TruncatedSeries::identity(const VarContext& ctx, const std::string& var, int order) {
    TruncatedSeries s(ctx, var, order);
    if (order > 1) s.c_[1] = ParamPoly::constant(ctx, 1);
    return s;
}

TruncatedSeries TruncatedSeries::from_poly(const ParamPoly& p, const std::string& var, int order) {
    TruncatedSeries s(p.context(), var, order);
    long d = std::min<long>(p.degree_in(var), order - 1);
    for (long k = 0; k <= d; ++k) s.c_[static_cast<size_t>(k)] = p.coefficient_of(var, k);
    return s;
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
    TruncatedSeries s(ctx_, var_, new_order);
    for (int k = 0; k < std::min(new_order, order_); ++k) s.c_[static_cast<size_t>(k)] = c_[static_cast<size_t>(k)];
    return s;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.same_shape(b)) throw VariableContextMismatch("series shape mismatch");
    TruncatedSeries r(a.ctx_, a.var_, std::min(a.order_, b.order_));
    for (int k = 0; k < r.order_; ++k) r.c_[static_cast<size_t>(k)] = a.coeff(k) + b.coeff(k);
    return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.same_shape(b)) throw VariableContextMismatch("series shape mismatch");
    TruncatedSeries r(a.ctx_, a.var_, std::min(a.order_, b.order_));
    for (int k = 0; k < r.order_; ++k) r.c_[static_cast<size_t>(k)] = a.coeff(k) - b.coeff(k);
    return r;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r(*this);
    for (auto& p : r.c_) p = -p;
    return r;
}

TruncatedSeries TruncatedSeries::scaled(const Rational& q) const {
    TruncatedSeries r(*this);
    for (auto& p : r.c_) p = p.scaled(q);
    return r;
}

TruncatedSeries TruncatedSeries::scaled_poly(const ParamPoly& p) const {
    TruncatedSeries r(*this);
    for (auto& ck : r.c_) ck = ck * p;
    return r;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.same_shape(b) || a.order_ != b.order_) return false;
    for (int k = 0; k < a.order_; ++k)
        if (a.coeff(k) != b.coeff(k)) return false;
    return true;
}

std::string TruncatedSeries::to_string(int max_terms) const {
    std::ostringstream os;
    int printed = 0;
    for (int k = 0; k < order_ && printed < max_terms; ++k) {
        if (c_[static_cast<size_t>(k)].is_zero()) continue;
        if (printed) os << " + ";
        os << "(" << c_[static_cast<size_t>(k)].to_string() << ")";
        if (k == 1) os << "*" << var_;
        else if (k > 1) os << "*" << var_ << "^" << k;
        ++printed;
    }
    if (!printed) os << "0";
    os << " + O(" << var_ << "^" << order_ << ")";
    return os.str();
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.same_shape(b)) throw VariableContextMismatch("series shape mismatch");
    int N = std::min(a.order(), b.order());
    TruncatedSeries r(a.context(), a.variable(), N);
    for (int i = 0; i < N; ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (int j = 0; i + j < N; ++j) {
            if (b.coeff(j).is_zero()) continue;
            r.coeff(i + j) = r.coeff(i + j) + a.coeff(i) * b.coeff(j);
        }
    }
    return r;
}

TruncatedSeries series_recip(const TruncatedSeries& a) {
    Rational a0;
    if (!a.coeff(0).is_rational_constant(a0) || rat_is_zero(a0))
        throw NonInvertibleConstantTerm("recip needs a nonzero rational constant term");
    int N = a.order();
    TruncatedSeries b(a.context(), a.variable(), N);
    Rational inv = Rational(a0.get_den(), a0.get_num());
    inv.canonicalize();
    b.coeff(0) = ParamPoly::constant(a.context(), inv);
    for (int n = 1; n < N; ++n) {
        ParamPoly s(a.context());
        for (int k = 1; k <= n; ++k) {
            if (a.coeff(k).is_zero() || b.coeff(n - k).is_zero()) continue;
            s = s + a.coeff(k) * b.coeff(n - k);
        }
        b.coeff(n) = (-s).scaled(inv);
    }
    return b;
}

TruncatedSeries series_compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
    if (!outer.same_shape(inner)) throw VariableContextMismatch("series shape mismatch");
    if (!inner.coeff(0).is_zero())
        throw NonzeroInnerConstant("compose needs inner constant term zero");
    int N = std::min(outer.order(), inner.order());
    // Horner in the series ring
    TruncatedSeries in = inner.truncated(N);
    TruncatedSeries r = TruncatedSeries::zero(outer.context(), outer.variable(), N);
    for (int k = N - 1; k >= 0; --k) {
        r = series_mul(r, in);
        r.coeff(0) = r.coeff(0) + outer.coeff(k);
    }
    return r;
}

TruncatedSeries series_revert(const TruncatedSeries& a) {
    if (a.order() < 2 || !a.coeff(0).is_zero())
        throw NonUnitLinearCoefficient("revert needs a(0)=0");
    Rational a1;
    if (!a.coeff(1).is_rational_constant(a1) || rat_is_zero(a1))
        throw NonUnitLinearCoefficient("revert needs a nonzero rational linear coefficient");
    int N = a.order();
    Rational inv = Rational(a1.get_den(), a1.get_num());
    inv.canonicalize();
    // Newton with the inverse Jacobian replaced by b' (exact in the limit,
    // keeps quadratic convergence): b <- b - (a(b) - x) * b', doubling the
    // trusted order each sweep.
    TruncatedSeries b(a.context(), a.variable(), N);
    b.coeff(1) = ParamPoly::constant(a.context(), inv);
    int good = 2;
    while (good < N) {
        int next = std::min(2 * good - 1, N);
        TruncatedSeries bt = b.truncated(next);
        TruncatedSeries comp = series_compose(a.truncated(next), bt);
        comp.coeff(1) = comp.coeff(1) - ParamPoly::constant(a.context(), 1);
        TruncatedSeries corr = series_mul(comp, series_differentiate(b.truncated(next + 1)));
        for (int k = 0; k < next; ++k) b.coeff(k) = bt.coeff(k) - corr.coeff(k);
        good = next;
    }
    return b;
}

TruncatedSeries series_exp(const TruncatedSeries& a) {
    if (!a.coeff(0).is_zero()) throw BadConstantTerm("exp needs a(0)=0");
    int N = a.order();
    TruncatedSeries b(a.context(), a.variable(), N);
    b.coeff(0) = ParamPoly::constant(a.context(), 1);
    // (exp a)' = a' exp a, termwise
    std::vector<ParamPoly> da(static_cast<size_t>(N));
    for (int k = 1; k < N; ++k) da[static_cast<size_t>(k)] = a.coeff(k).scaled(Rational(k));
    for (int n = 1; n < N; ++n) {
        ParamPoly s(a.context());
        for (int k = 1; k <= n; ++k) {
            if (da[static_cast<size_t>(k)].is_zero() || b.coeff(n - k).is_zero()) continue;
            s = s + da[static_cast<size_t>(k)] * b.coeff(n - k);
        }
        b.coeff(n) = s.scaled(Rational(1, n));
    }
    return b;
}

TruncatedSeries series_log(const TruncatedSeries& a) {
    Rational a0;
    if (!a.coeff(0).is_rational_constant(a0) || a0 != 1)
        throw BadConstantTerm("log needs a(0)=1");
    // log(a) = integrate(a'/a)
    TruncatedSeries da = series_differentiate(a);
    TruncatedSeries q = series_mul(da, series_recip(a.truncated(a.order() - 1)));
    return series_integrate(q);
}

TruncatedSeries series_integrate(const TruncatedSeries& a) {
    TruncatedSeries r(a.context(), a.variable(), a.order() + 1);
    for (int k = 0; k < a.order(); ++k)
        r.coeff(k + 1) = a.coeff(k).scaled(Rational(1, k + 1));
    return r;
}

TruncatedSeries series_differentiate(const TruncatedSeries& a) {
    int N = std::max(a.order() - 1, 0);
    TruncatedSeries r(a.context(), a.variable(), N);
    for (int k = 0; k < N; ++k)
        r.coeff(k) = a.coeff(k + 1).scaled(Rational(k + 1));
    return r;
}

TruncatedSeries series_sqrt_unit(const TruncatedSeries& a) {
    Rational a0;
    if (!a.coeff(0).is_rational_constant(a0) || a0 != 1)
        throw BadConstantTerm("sqrt_unit needs a(0)=1");
    int N = a.order();
    TruncatedSeries b(a.context(), a.variable(), N);
    b.coeff(0) = ParamPoly::constant(a.context(), 1);
    // b^2 = a: 2 b0 bn = an - sum_{k=1..n-1} bk b_{n-k}
    for (int n = 1; n < N; ++n) {
        ParamPoly s = a.coeff(n);
        for (int k = 1; k < n; ++k) {
            if (b.coeff(k).is_zero() || b.coeff(n - k).is_zero()) continue;
            s = s - b.coeff(k) * b.coeff(n - k);
        }
        b.coeff(n) = s.scaled(Rational(1, 2));
    }
    return b;
}

TruncatedSeries series_shift_down(const TruncatedSeries& a, int k) {
    for (int i = 0; i < std::min(k, a.order()); ++i)
        if (!a.coeff(i).is_zero())
            throw BadConstantTerm("shift_down would drop a nonzero coefficient");
    TruncatedSeries r(a.context(), a.variable(), a.order() - k);
    for (int i = 0; i < r.order(); ++i) r.coeff(i) = a.coeff(i + k);
    return r;
}

TruncatedSeries series_pow(const TruncatedSeries& a, long e) {
    if (e < 0) throw NegativeExponent();
    TruncatedSeries r = TruncatedSeries::constant(a.context(), a.variable(), a.order(), 1);
    TruncatedSeries base = a;
    while (e > 0) {
        if (e & 1) r = series_mul(r, base);
        if (e > 1) base = series_mul(base, base);
        e >>= 1;
    }
    return r;
}

} // namespace isochron
