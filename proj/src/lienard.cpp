#include "isochron/lienard.hpp"

#include <sstream>

namespace isochron {

ParamPoly field_derivative(const ParamPoly& Z, const PlanarField& f) {
    return Z.differentiate("x") * f.xdot + Z.differentiate("y") * f.ydot;
}

ParamPoly divergence(const PlanarField& f) {
    return f.xdot.differentiate("x") + f.ydot.differentiate("y");
}

PlanarField lie_bracket(const PlanarField& X, const PlanarField& Y) {
    if (X.context() != Y.context()) throw VariableContextMismatch("lie_bracket: contexts differ");
    auto comp = [&](const ParamPoly& Yi, const ParamPoly& Xi) {
        return Yi.differentiate("x") * X.xdot + Yi.differentiate("y") * X.ydot
             - (Xi.differentiate("x") * Y.xdot + Xi.differentiate("y") * Y.ydot);
    };
    return PlanarField{comp(Y.xdot, X.xdot), comp(Y.ydot, X.ydot)};
}

namespace {

// slot fraction sanity: denominator must not involve x
void require_x_free_den(const PolyFraction& s, const char* what) {
    if (s.den.context().contains("x") && s.den.degree_in("x") > 0)
        throw MalformedSystem(std::string(what) + ": denominator depends on x");
}

ParamPoly slot_value_at_zero(const PolyFraction& s) {
    // numerator with x = 0
    return s.num.coefficient_of("x", 0);
}

} // namespace

PlanarSystem PlanarSystem::case1(PolyFraction A, PolyFraction B, PolyFraction C,
                                 std::vector<std::string> params) {
    PlanarSystem s;
    s.shape_ = Shape::Case1;
    s.params_ = std::move(params);
    s.slot_ctx_ = A.context();
    if (!s.slot_ctx_.contains("x")) throw MalformedSystem("Case 1 slots must live over {x, parameters}");
    require_x_free_den(A, "A");
    require_x_free_den(B, "B");
    require_x_free_den(C, "C");
    // A(0) = 1 and B = x + O(x^2) exactly (the linear part is the linear center)
    if (slot_value_at_zero(A) != A.den)
        throw MalformedSystem("A(0) must equal 1");
    if (!slot_value_at_zero(B).is_zero())
        throw MalformedSystem("B(0) must equal 0");
    if (B.num.coefficient_of("x", 1) != B.den)
        throw MalformedSystem("B'(0) must equal 1");
    s.A_ = std::move(A);
    s.B_ = std::move(B);
    s.C_ = std::move(C);
    return s;
}

PlanarSystem PlanarSystem::case2(PolyFraction P, std::vector<std::string> params) {
    PlanarSystem s;
    s.shape_ = Shape::Case2;
    s.params_ = std::move(params);
    s.slot_ctx_ = P.context();
    if (!s.slot_ctx_.contains("x")) throw MalformedSystem("Case 2 slot must live over {x, parameters}");
    require_x_free_den(P, "P");
    if (!slot_value_at_zero(P).is_zero()) throw MalformedSystem("P(0) must equal 0");
    s.P_ = std::move(P);
    return s;
}

PlanarSystem PlanarSystem::from_components(const PolyFraction& xdot, const PolyFraction& ydot,
                                           std::vector<std::string> params) {
    const VarContext& ctx = xdot.context();
    if (!ctx.contains("x") || !ctx.contains("y"))
        throw MalformedSystem("system components must live over {x, y, parameters}");
    std::vector<std::string> slot_names = {"x"};
    for (const auto& p : params) slot_names.push_back(p);
    VarContext slot_ctx = VarContext::make(slot_names);

    require_x_free_den(xdot, "xdot");
    require_x_free_den(ydot, "ydot");
    if (xdot.den.degree_in("y") > 0 || ydot.den.degree_in("y") > 0)
        throw MalformedSystem("denominators must be parameter-only");

    auto project_slot = [&](const ParamPoly& num, const ParamPoly& den) {
        return PolyFraction(num.project_to(slot_ctx), den.project_to(slot_ctx));
    };

    // Case 2: xdot == -y, ydot = x*(1 + P(y))
    ParamPoly minus_y = -ParamPoly::variable(ctx, "y") * xdot.den;
    if (xdot.num == minus_y) {
        bool pure_case2 = true;
        PolyBuilder pb(slot_ctx);
        int xi = slot_ctx.index_of("x");
        long dy = ydot.num.degree_in("y");
        for (long k = 0; k <= dy && pure_case2; ++k) {
            ParamPoly ck = ydot.num.coefficient_of("y", k);   // polynomial in x, params
            if (ck.is_zero()) continue;
            if (ck.degree_in("x") != 1 || !ck.coefficient_of("x", 0).is_zero()) {
                pure_case2 = false;
                break;
            }
            // ydot.num = x * sum_k a_k(params) y^k; collect a_k x^k (formal x for y)
            ParamPoly ak = ck.coefficient_of("x", 1).project_to(slot_ctx);
            for (const auto& t : ak.terms()) {
                Monomial m = t.m;
                m.e[xi] = static_cast<int16_t>(m.e[xi] + k);
                pb.add(m, t.c);
            }
        }
        if (pure_case2) {
            ParamPoly series = pb.build();                    // den*(1 + P(formal x))
            ParamPoly den = ydot.den.project_to(slot_ctx);
            PolyFraction P(series - den, den);
            if (slot_value_at_zero(P).is_zero())
                return case2(std::move(P), std::move(params));
        }
    }

    // Case 1: xdot = -y*A(x), ydot = B(x) + C(x) y^2
    for (long k = 0; k <= xdot.num.degree_in("y"); ++k)
        if (k != 1 && !xdot.num.coefficient_of("y", k).is_zero())
            throw MalformedSystem("shape not Case1/Case2: xdot must be -y*A(x)");
    ParamPoly Anum = -xdot.num.coefficient_of("y", 1);
    if (Anum.degree_in("y") > 0) throw MalformedSystem("shape not Case1/Case2: A must depend on x only");
    for (long k = 0; k <= ydot.num.degree_in("y"); ++k)
        if (k != 0 && k != 2 && !ydot.num.coefficient_of("y", k).is_zero())
            throw MalformedSystem("shape not Case1/Case2: ydot must be B(x) + C(x) y^2");
    ParamPoly Bnum = ydot.num.coefficient_of("y", 0);
    ParamPoly Cnum = ydot.num.coefficient_of("y", 2);
    if (Bnum.degree_in("y") > 0 || Cnum.degree_in("y") > 0)
        throw MalformedSystem("shape not Case1/Case2");
    return case1(project_slot(Anum, xdot.den),
                 project_slot(Bnum, ydot.den),
                 project_slot(Cnum, ydot.den), std::move(params));
}

bool PlanarSystem::slots_polynomial() const {
    if (shape_ == Shape::Case1)
        return A_.is_polynomial() && B_.is_polynomial() && C_.is_polynomial();
    return P_.is_polynomial();
}

PlanarField PlanarSystem::field() const {
    if (!slots_polynomial())
        throw MalformedSystem("field() needs polynomial slots; bind the parameters first");
    std::vector<std::string> names = {"x", "y"};
    for (const auto& p : params_) names.push_back(p);
    VarContext ctx = VarContext::make(names);
    ParamPoly y = ParamPoly::variable(ctx, "y");
    ParamPoly x = ParamPoly::variable(ctx, "x");
    if (shape_ == Shape::Case1) {
        ParamPoly A = A_.as_polynomial().project_to(ctx);
        ParamPoly B = B_.as_polynomial().project_to(ctx);
        ParamPoly C = C_.as_polynomial().project_to(ctx);
        return PlanarField{-y * A, B + C * y * y};
    }
    // Case 2: P is stored with the formal variable x; swap x^k -> y^k
    ParamPoly Ps = P_.as_polynomial();
    PolyBuilder pb(ctx);
    int xi_src = Ps.context().index_of("x");
    int yi = ctx.index_of("y");
    for (const auto& t : Ps.terms()) {
        Monomial m = Monomial::one(ctx.size());
        for (int i = 0; i < t.m.n; ++i) {
            if (t.m.e[i] == 0) continue;
            int j = i == xi_src ? yi : ctx.index_of(Ps.context().name(i));
            if (j < 0) throw VariableContextMismatch("field(): missing parameter in context");
            m.e[j] = t.m.e[i];
        }
        pb.add(m, t.c);
    }
    ParamPoly Py = pb.build();
    return PlanarField{-y, x * (ParamPoly::constant(ctx, 1) + Py)};
}

PlanarSystem PlanarSystem::bind(const std::map<std::string, Rational>& values) const {
    std::map<std::string, Binding> b;
    std::vector<std::string> remaining;
    for (const auto& p : params_) {
        auto it = values.find(p);
        if (it != values.end()) b.emplace(p, Binding(it->second));
        else remaining.push_back(p);
    }
    auto bind_slot = [&](const PolyFraction& s) {
        PolyFraction r(s.num.substitute_exact(b), s.den.substitute_exact(b));
        if (r.den.is_zero()) throw ConstraintViolation("binding zeroes a denominator");
        return r;
    };
    if (shape_ == Shape::Case1)
        return case1(bind_slot(A_), bind_slot(B_), bind_slot(C_), remaining);
    return case2(bind_slot(P_), remaining);
}

std::string PlanarSystem::describe() const {
    std::ostringstream os;
    if (shape_ == Shape::Case1) {
        os << "case1 A = " << A_.to_string() << "; B = " << B_.to_string()
           << "; C = " << C_.to_string();
    } else {
        os << "case2 P = " << P_.to_string();
    }
    return os.str();
}

LienardForm reduce_to_lienard(const PlanarSystem& s) {
    if (s.shape() == PlanarSystem::Shape::Case1) {
        // f = -(A' - C)/A, g = A*B
        PolyFraction Ax(s.A().num.differentiate("x"), s.A().den);
        PolyFraction f = (s.C() - Ax) / s.A();
        PolyFraction g = s.A() * s.B();
        return LienardForm{f, g};
    }
    // f = -P'/(1+P), g = x(1+P)
    const VarContext& ctx = s.slot_context();
    PolyFraction one(ParamPoly::constant(ctx, 1));
    PolyFraction xfrac(ParamPoly::variable(ctx, "x"));
    PolyFraction onePlusP = one + s.P();
    PolyFraction Pd(s.P().num.differentiate("x"), s.P().den);
    return LienardForm{-(Pd / onePlusP), xfrac * onePlusP};
}

SeriesBundle build_series_bundle(const LienardForm& l, int order) {
    const VarContext& ctx = l.f.num.context();
    int N = order;
    auto to_series = [&](const PolyFraction& fr) {
        TruncatedSeries num = TruncatedSeries::from_poly(fr.num, "x", N);
        TruncatedSeries den = TruncatedSeries::from_poly(fr.den, "x", N);
        return series_mul(num, series_recip(den));
    };
    SeriesBundle b;
    b.order = N;
    b.f = to_series(l.f);
    b.g = to_series(l.g);
    b.F = series_integrate(b.f).truncated(N);
    b.eF = series_exp(b.F);
    b.e2F = series_exp(b.F.scaled(Rational(2)));
    b.phi = series_integrate(b.eF).truncated(N);
    b.geF = series_mul(b.g, b.eF);
    TruncatedSeries ge2F = series_mul(b.g, b.e2F);
    TruncatedSeries twoInt = series_integrate(ge2F).truncated(N + 2).scaled(Rational(2));
    // 2*Int g e^{2F} = x^2 * unit; divide by x^2 exactly, take sqrt, put x back
    TruncatedSeries unit = series_shift_down(twoInt, 2);
    TruncatedSeries root = series_sqrt_unit(unit.truncated(N - 1));
    b.X = TruncatedSeries::zero(ctx, "x", N);
    for (int k = 0; k + 1 < N; ++k) b.X.coeff(k + 1) = root.coeff(k);
    (void)ctx;
    return b;
}

SeriesBundle LienardForm::series(int order) const { return build_series_bundle(*this, order); }

std::vector<ParamPoly> zero_urabe_conditions(const PlanarSystem& s) {
    ParamPoly numerator(s.slot_context());
    if (s.shape() == PlanarSystem::Shape::Case1) {
        // A_n B_n' C_d + C_n B_n A_d - A_d B_d C_d  ==  0
        numerator = s.A().num * s.B().num.differentiate("x") * s.C().den
                  + s.C().num * s.B().num * s.A().den
                  - s.A().den * s.B().den * s.C().den;
    } else {
        numerator = s.P().num;
    }
    std::vector<ParamPoly> out;
    long d = numerator.degree_in("x");
    for (long k = 0; k <= d; ++k) {
        ParamPoly c = numerator.coefficient_of("x", k);
        if (!c.is_zero()) out.push_back(c.primitive_part());
    }
    return out;
}

TruncatedSeries energy_first_integral(const LienardForm& l, int order) {
    VarContext ctxI = l.f.num.context().extended({"xdot"});
    LienardForm lifted{
        PolyFraction(l.f.num.project_to(ctxI), l.f.den.project_to(ctxI)),
        PolyFraction(l.g.num.project_to(ctxI), l.g.den.project_to(ctxI))};
    SeriesBundle b = build_series_bundle(lifted, order);
    TruncatedSeries ge2F = series_mul(b.g, b.e2F);
    TruncatedSeries I = series_integrate(ge2F).truncated(order).scaled(Rational(2));
    ParamPoly xdot2 = ParamPoly::variable(ctxI, "xdot", 2);
    TruncatedSeries kinetic = series_mul(b.eF, b.eF).scaled_poly(xdot2);
    return I + kinetic;
}

bool check_power_integral(const PowerIntegral& H, const PlanarField& field) {
    ParamPoly lhs = field_derivative(H.num, field).scaled(Rational(H.q)) * H.base
                  - H.num.scaled(Rational(H.p)) * field_derivative(H.base, field);
    return lhs.is_zero();
}

bool check_linearization(const LinearizationData& lin, const PlanarField& field) {
    const Rational p(lin.p), q(lin.q);
    ParamPoly i1 = field_derivative(lin.M, field).scaled(q) * lin.D
                 + lin.M.scaled(p) * field_derivative(lin.D, field)
                 + lin.N.scaled(q) * lin.D;
    if (!i1.is_zero()) return false;
    ParamPoly i2 = field_derivative(lin.N, field).scaled(q) * lin.D
                 + lin.N.scaled(p) * field_derivative(lin.D, field)
                 - lin.M.scaled(q) * lin.D;
    return i2.is_zero();
}

bool check_inverse_integrating_factor(const ParamPoly& V, const PlanarField& X) {
    if (V.is_zero()) throw ZeroV();
    ParamPoly lhs = field_derivative(V, X);
    ParamPoly rhs = V * divergence(X);
    return lhs == rhs;
}

} // namespace isochron
