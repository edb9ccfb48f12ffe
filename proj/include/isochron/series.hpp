#ifndef ISOCHRON_SERIES_HPP
#define ISOCHRON_SERIES_HPP

#include <string>
#include <vector>

#include "isochron/poly.hpp"

namespace isochron {

// Truncated power series in one formal variable with ParamPoly coefficients.
// `order` is the exclusive truncation bound: coefficients c0..c_{order-1} are
// stored and exact; everything from x^order on is unknown.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(VarContext coeff_ctx, std::string var, int order)
        : ctx_(std::move(coeff_ctx)), var_(std::move(var)), order_(order),
          c_(static_cast<size_t>(order), ParamPoly(ctx_)) {}

    static TruncatedSeries zero(const VarContext& ctx, const std::string& var, int order) {
        return TruncatedSeries(ctx, var, order);
    }
    static TruncatedSeries constant(const VarContext& ctx, const std::string& var, int order,
                                    const Rational& c);
    static TruncatedSeries identity(const VarContext& ctx, const std::string& var, int order);
    // series of a polynomial in `var` whose coefficients may involve the
    // other context variables
    static TruncatedSeries from_poly(const ParamPoly& p, const std::string& var, int order);

    const VarContext& context() const { return ctx_; }
    const std::string& variable() const { return var_; }
    int order() const { return order_; }
    const ParamPoly& coeff(int k) const { return c_[static_cast<size_t>(k)]; }
    ParamPoly& coeff(int k) { return c_[static_cast<size_t>(k)]; }

    TruncatedSeries truncated(int new_order) const;

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    TruncatedSeries operator-() const;
    TruncatedSeries scaled(const Rational& r) const;
    TruncatedSeries scaled_poly(const ParamPoly& p) const;

    bool same_shape(const TruncatedSeries& o) const {
        return ctx_ == o.ctx_ && var_ == o.var_;
    }
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);
    std::string to_string(int max_terms = 12) const;

private:
    VarContext ctx_;
    std::string var_;
    int order_ = 0;
    std::vector<ParamPoly> c_;
};

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
// 1/a; requires a nonzero parameter-free rational constant term.
TruncatedSeries series_recip(const TruncatedSeries& a);
// outer(inner); requires inner constant term zero.
TruncatedSeries series_compose(const TruncatedSeries& outer, const TruncatedSeries& inner);
// b with a(b(x)) = x; requires a(0)=0 and a'(0) a nonzero rational constant.
TruncatedSeries series_revert(const TruncatedSeries& a);
// exp(a) for a(0)=0, log(a) for a(0)=1.
TruncatedSeries series_exp(const TruncatedSeries& a);
TruncatedSeries series_log(const TruncatedSeries& a);
// termwise antiderivative with zero constant (order grows by 1) / derivative
// (order drops by 1).
TruncatedSeries series_integrate(const TruncatedSeries& a);
TruncatedSeries series_differentiate(const TruncatedSeries& a);
// sqrt of a unit series, a(0)=1, result constant term 1.
TruncatedSeries series_sqrt_unit(const TruncatedSeries& a);
// a / x^k; the dropped coefficients must be zero.
TruncatedSeries series_shift_down(const TruncatedSeries& a, int k);
TruncatedSeries series_pow(const TruncatedSeries& a, long e);

} // namespace isochron

#endif
