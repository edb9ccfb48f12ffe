#ifndef ISOCHRON_ALGEBRAIC_HPP
#define ISOCHRON_ALGEBRAIC_HPP

#include <functional>
#include <string>
#include <vector>

#include "isochron/poly.hpp"

namespace isochron {

// A real algebraic number pinned down by a defining polynomial and an
// isolating interval, optionally with a radical closed form. Evaluation runs
// at prec+guard bits and rounds back, so results are reproducible bit for bit
// at a fixed precision.
class AlgebraicConstant {
public:
    AlgebraicConstant() = default;
    AlgebraicConstant(std::string id, std::vector<Rational> defining_coeffs, double lo, double hi,
                      std::function<BigFloat(mpfr_prec_t)> radical = nullptr)
        : id_(std::move(id)), coeffs_(std::move(defining_coeffs)), lo_(lo), hi_(hi),
          radical_(std::move(radical)) {}

    const std::string& id() const { return id_; }
    // defining polynomial, coefficients c0 + c1 s + c2 s^2 + ...
    const std::vector<Rational>& defining() const { return coeffs_; }

    BigFloat evaluate(mpfr_prec_t prec = BigFloat::kDefaultPrec) const;
    BigFloat defining_residual(const BigFloat& at) const;
    // radical closed form when available (cross-check against the Newton value)
    bool has_radical() const { return static_cast<bool>(radical_); }
    BigFloat evaluate_radical(mpfr_prec_t prec = BigFloat::kDefaultPrec) const;

    static const AlgebraicConstant& lookup(const std::string& id);
    static std::vector<std::string> known_ids();

private:
    std::string id_;
    std::vector<Rational> coeffs_;
    double lo_ = 0, hi_ = 0;
    std::function<BigFloat(mpfr_prec_t)> radical_;
};

} // namespace isochron

#endif
