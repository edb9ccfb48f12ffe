#ifndef ISOCHRON_LIENARD_HPP
#define ISOCHRON_LIENARD_HPP

#include <optional>
#include <string>
#include <vector>

#include "isochron/fraction.hpp"
#include "isochron/series.hpp"

namespace isochron {

// Polynomial vector field (xdot, ydot) over a context containing x and y.
struct PlanarField {
    ParamPoly xdot;
    ParamPoly ydot;

    const VarContext& context() const { return xdot.context(); }
};

// Derivative of Z along the field: Z_x*xdot + Z_y*ydot.
ParamPoly field_derivative(const ParamPoly& Z, const PlanarField& f);
ParamPoly divergence(const PlanarField& f);
PlanarField lie_bracket(const PlanarField& X, const PlanarField& Y);

// A planar system reducible to a Lienard type equation.
//   Case 1: xdot = -y*A(x),  ydot = B(x) + C(x)*y^2,  A(0)=1, B = x + O(x^2)
//   Case 2: xdot = -y,       ydot = x*(1 + P(y)),     P(0)=0
// Slots are rational in the parameters (denominators free of x) and are
// stored over the context {x, parameters...}; for Case 2 the stored P is
// P evaluated at the formal variable x.
class PlanarSystem {
public:
    enum class Shape { Case1, Case2 };

    static PlanarSystem case1(PolyFraction A, PolyFraction B, PolyFraction C,
                              std::vector<std::string> params);
    static PlanarSystem case2(PolyFraction P, std::vector<std::string> params);

    // Shape detection from raw components given over {x, y, params...}.
    static PlanarSystem from_components(const PolyFraction& xdot, const PolyFraction& ydot,
                                        std::vector<std::string> params);

    Shape shape() const { return shape_; }
    const std::vector<std::string>& parameters() const { return params_; }
    const VarContext& slot_context() const { return slot_ctx_; }   // {x, params}
    const PolyFraction& A() const { return A_; }
    const PolyFraction& B() const { return B_; }
    const PolyFraction& C() const { return C_; }
    const PolyFraction& P() const { return P_; }

    bool slots_polynomial() const;
    // Field over {x, y, params}; requires polynomial slots.
    PlanarField field() const;

    // Bind parameters to exact rationals (partial binding allowed). Bindings
    // that zero a slot denominator raise ConstraintViolation.
    PlanarSystem bind(const std::map<std::string, Rational>& values) const;

    std::string describe() const;

private:
    PlanarSystem() = default;
    Shape shape_ = Shape::Case1;
    std::vector<std::string> params_;
    VarContext slot_ctx_;
    PolyFraction A_, B_, C_, P_;
};

// Series data derived from a Lienard form, everything exact to `order`.
struct SeriesBundle {
    int order = 0;
    TruncatedSeries f, g, F, eF, e2F, phi, X, geF;
};

// The pair (f, g) of the Lienard type equation x'' + f(x) x'^2 + g(x) = 0.
struct LienardForm {
    PolyFraction f;
    PolyFraction g;

    SeriesBundle series(int order) const;
};

LienardForm reduce_to_lienard(const PlanarSystem& s);
SeriesBundle build_series_bundle(const LienardForm& l, int order);

// Coefficients (in the parameters) of the polynomial identity equivalent to
// g' + g f = 1 after clearing denominators. Empty list <=> the identity holds
// for every parameter value.
std::vector<ParamPoly> zero_urabe_conditions(const PlanarSystem& s);

// I(x, xdot) = 2*Int g e^{2F} + (xdot e^F)^2 as a series in x whose
// coefficients are polynomials in {parameters, xdot}.
TruncatedSeries energy_first_integral(const LienardForm& l, int order);

// H = num / base^{p/q}
struct PowerIntegral {
    ParamPoly num;
    ParamPoly base;
    long p = 1;
    long q = 1;
};

bool check_power_integral(const PowerIntegral& H, const PlanarField& field);

// u = M * D^{p/q}, v = N * D^{p/q} with a shared base D.
struct LinearizationData {
    ParamPoly M;
    ParamPoly N;
    ParamPoly D;
    long p = 0;
    long q = 1;
};

bool check_linearization(const LinearizationData& lin, const PlanarField& field);

// X . grad V == V div X
bool check_inverse_integrating_factor(const ParamPoly& V, const PlanarField& X);

} // namespace isochron

#endif
