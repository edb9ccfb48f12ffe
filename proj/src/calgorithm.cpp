#include "isochron/calgorithm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

namespace isochron {

namespace {

bool contains_poly(const std::vector<ParamPoly>& v, const ParamPoly& p) {
    for (const auto& q : v)
        if (q == p) return true;
    return false;
}

// [u^k] of a*b without computing the full product.
ParamPoly coeff_of_product(const TruncatedSeries& a, const TruncatedSeries& b, int k) {
    ParamPoly s(a.context());
    for (int i = 0; i <= k; ++i) {
        if (a.coeff(i).is_zero() || b.coeff(k - i).is_zero()) continue;
        s = s + a.coeff(i) * b.coeff(k - i);
    }
    return s;
}

GenerateResult generate_sys_impl(const PlanarSystem& s, int m, int extra_order,
                                 long time_limit_ms) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(time_limit_ms);
    if (m < 1) throw EngineError("UsageError", "order m must be >= 1");
    if (!s.slots_polynomial())
        throw MalformedSystem("generate_sys needs polynomial coefficients; bind the parameters first");
    const int N = 2 * m + 4 + extra_order;
    VarContext work = s.slot_context();
    VarContext params_ctx = VarContext::make(s.parameters());

    // minimal bundle: f -> F -> e^F -> phi
    LienardForm l = reduce_to_lienard(s);
    TruncatedSeries fnum = TruncatedSeries::from_poly(l.f.num, "x", N);
    TruncatedSeries fden = TruncatedSeries::from_poly(l.f.den, "x", N);
    TruncatedSeries fser = series_mul(fnum, series_recip(fden));
    TruncatedSeries phi = series_integrate(series_exp(series_integrate(fser).truncated(N))).truncated(N);

    // x(u), then both sides of the matching identity:
    //   e^{F(x(u))} = 1 / x'(u)           (from phi' = e^F)
    //   L(u) = g(x(u)) * e^{F(x(u))}
    //   Xu(u)^2 = 2 Int_0^u L(t) dt       (chain rule through X^2 = 2 Int g e^{2F})
    TruncatedSeries xu = series_revert(phi);
    TruncatedSeries inv_xup = series_recip(series_differentiate(xu));
    ParamPoly g = l.g.as_polynomial();
    TruncatedSeries g_at_xu = series_compose(TruncatedSeries::from_poly(g, "x", N - 1),
                                             xu.truncated(N - 1));
    TruncatedSeries L = series_mul(g_at_xu, inv_xup);
    TruncatedSeries IL = series_integrate(L).scaled(Rational(2));
    TruncatedSeries root = series_sqrt_unit(series_shift_down(IL, 2).truncated(N - 2));
    TruncatedSeries Xu(work, "x", N - 1);
    for (int k = 0; k + 1 < N - 1; ++k) Xu.coeff(k + 1) = root.coeff(k);

    GenerateResult out;
    out.derivation.order_m = m;
    out.derivation.truncation = N;
    out.derivation.lhs = L;

    // index 1 is structurally trivial: both sides start with u
    {
        Rational l1, x1;
        if (!L.coeff(0).is_zero() || !L.coeff(1).is_rational_constant(l1) || l1 != 1 ||
            !Xu.coeff(1).is_rational_constant(x1) || x1 != 1)
            throw MalformedSystem("matched series must both start with u");
        ConditionRecord r;
        r.index = 1;
        r.kind = ConditionRecord::Kind::Trivial;
        r.payload = ParamPoly::constant(params_ctx, 1);
        out.derivation.records.push_back(std::move(r));
    }

    // odd powers of X(u) feeding h(X(u))
    const int NW = std::min<int>(N - 1, 2 * m + 2);   // highest coefficient ever read
    TruncatedSeries Xu2 = series_mul(Xu, Xu);
    std::vector<TruncatedSeries> odd_pow;   // odd_pow[i] = Xu^{2i+1}
    odd_pow.push_back(Xu.truncated(NW));
    for (int i = 1; i <= m; ++i)
        odd_pow.push_back(series_mul(odd_pow.back(), Xu2.truncated(NW)));

    TruncatedSeries W = TruncatedSeries::constant(work, "x", NW, 1);   // 1 + resolved h(X(u))
    TruncatedSeries RW = W;                                            // recip(W)

    for (int k = 2; k <= 2 * m + 1; ++k) {
        if (time_limit_ms > 0 && std::chrono::steady_clock::now() > deadline)
            throw ResourceLimit("time limit exceeded in condition generation");
        ParamPoly dhat = L.coeff(k) - coeff_of_product(Xu, RW, k);
        if (k % 2 == 0) {
            // R(c) = Xu * recip(W + c Xu^{k-1}); expanding in c, the c^j term is
            // Xu^{1+j(k-1)} RW^{j+1} * (-c)^j, of order >= 1 + j(k-1) > k for
            // j >= 2, so c occurs exactly linearly at index k with coefficient
            // (Xu_1)^k (RW_0)^2.
            Rational x1, w0;
            if (!Xu.coeff(1).is_rational_constant(x1) || rat_is_zero(x1) ||
                !RW.coeff(0).is_rational_constant(w0) || rat_is_zero(w0))
                throw NonlinearCOccurrence("linear coefficient of c_" + std::to_string(k - 1) +
                                           " is not a nonzero rational constant");
            Rational A = rat_pow(x1, k) * w0 * w0;
            Rational invA(A.get_den(), A.get_num());
            invA.canonicalize();
            ParamPoly cval = (-dhat).scaled(invA);
            ConditionRecord r;
            r.index = k;
            r.kind = ConditionRecord::Kind::Eliminated;
            r.payload = cval.project_to(params_ctx);
            out.derivation.records.push_back(r);
            out.urabe.phi[k - 1] = r.payload;
            const TruncatedSeries& XP = odd_pow[static_cast<size_t>(k / 2 - 1)];
            for (int n = k - 1; n < NW; ++n) W.coeff(n) = W.coeff(n) + XP.coeff(n) * cval;
            RW = series_recip(W);
        } else {
            ConditionRecord r;
            r.index = k;
            r.kind = ConditionRecord::Kind::Condition;
            r.payload = dhat.project_to(params_ctx);
            out.derivation.records.push_back(r);
            if (!dhat.is_zero()) {
                ParamPoly norm = r.payload.primitive_part();
                if (!contains_poly(out.conditions.polys, norm))
                    out.conditions.polys.push_back(std::move(norm));
            }
        }
    }

    out.derivation.rhs = series_mul(Xu.truncated(NW), RW);
    return out;
}

} // namespace

GenerateResult generate_sys(const PlanarSystem& s, int m, const GenerateOptions& opt) {
    GenerateResult r = generate_sys_impl(s, m, 0, opt.time_limit_ms);
    if (opt.cross_check) {
        GenerateResult r2 = generate_sys_impl(s, m, 2, opt.time_limit_ms);
        bool same = r.conditions.polys.size() == r2.conditions.polys.size() &&
                    r.urabe.phi.size() == r2.urabe.phi.size();
        if (same)
            for (size_t i = 0; i < r.conditions.polys.size(); ++i)
                if (r.conditions.polys[i] != r2.conditions.polys[i]) { same = false; break; }
        if (same)
            for (const auto& [k, v] : r.urabe.phi)
                if (!(r2.urabe.phi.count(k) && r2.urabe.phi.at(k) == v)) { same = false; break; }
        if (!same)
            throw TruncationSensitivity("generate_sys output differs between N and N+2");
    }
    return r;
}

CandidateReport verify_candidate(const PlanarSystem& s,
                                 const std::map<std::string, Binding>& point, int m,
                                 long bigfloat_digits) {
    std::map<std::string, Rational> exact;
    std::map<std::string, Binding> numeric;
    for (const auto& [name, val] : point) {
        if (const auto* r = std::get_if<Rational>(&val)) exact.emplace(name, *r);
        else if (std::holds_alternative<BigFloat>(val)) numeric.emplace(name, val);
        else throw UnboundParameter("verify_candidate points bind numbers, not polynomials");
    }
    PlanarSystem bound = s.bind(exact);
    for (const auto& p : bound.parameters())
        if (!numeric.count(p)) throw UnboundParameter("parameter not bound: " + p);

    GenerateResult gen = generate_sys(bound, m);
    CandidateReport rep;
    rep.order_m = m;
    rep.pass = true;
    const bool numeric_mode = !numeric.empty();

    auto eval_entry = [&](const ParamPoly& p) {
        ResidualEntry e;
        e.condition = p;
        if (!numeric_mode) {
            Rational v;
            if (!p.is_rational_constant(v))
                throw UnboundParameter("condition still has free parameters");
            e.exact = v;
            e.zero = rat_is_zero(v);
        } else {
            BigFloat v = p.evaluate_bigfloat(numeric);
            e.zero = v.below_pow10(bigfloat_digits);
            e.numeric = std::move(v);
        }
        return e;
    };

    for (const auto& c : gen.conditions.polys) {
        ResidualEntry e = eval_entry(c);
        rep.pass = rep.pass && e.zero;
        rep.residuals.push_back(std::move(e));
    }
    for (const auto& [k, phi] : gen.urabe.phi) rep.urabe.emplace(k, eval_entry(phi));
    return rep;
}

UrabeClosedForm UrabeClosedForm::make(const ParamPoly& k1, const Rational& k2,
                                      const ParamPoly& k3, long s) {
    if (sgn(k2) <= 0) throw NonPositiveK2();
    if (s < 1 || s % 2 == 0) throw EngineError("UsageError", "s must be an odd positive integer");
    UrabeClosedForm h;
    h.s = s;
    if (k2 == 1) {
        h.k1 = k1;
        h.k3 = k3;
        return h;
    }
    Rational root;
    if (!rat_exact_sqrt(k2, root))
        throw NonPositiveK2("k2 must be 1 or a rational square to fold into k1");
    Rational inv_root(root.get_den(), root.get_num());
    inv_root.canonicalize();
    Rational inv_k2(k2.get_den(), k2.get_num());
    inv_k2.canonicalize();
    h.k1 = k1.scaled(inv_root);
    h.k3 = k3.scaled(inv_k2);
    return h;
}

bool urabe_series_check(const LienardForm& l, const UrabeClosedForm& h, int order) {
    if (order < 2 * h.s + 2)
        throw EngineError("UsageError", "order must be at least 2s+2");
    SeriesBundle b = build_series_bundle(l, order);
    const VarContext& ctx = b.X.context();
    ParamPoly k1 = h.k1.is_zero() ? ParamPoly::zero(ctx) : h.k1.project_to(ctx);
    ParamPoly k3 = h.k3.is_zero() ? ParamPoly::zero(ctx) : h.k3.project_to(ctx);
    TruncatedSeries Xs = series_pow(b.X, h.s);
    TruncatedSeries X2s = series_mul(Xs, Xs);
    TruncatedSeries inner = TruncatedSeries::constant(ctx, "x", order, 1) + X2s.scaled_poly(k3);
    TruncatedSeries hX = series_mul(Xs.scaled_poly(k1), series_recip(series_sqrt_unit(inner)));
    TruncatedSeries lhs = series_mul(b.X, series_recip(TruncatedSeries::constant(ctx, "x", order, 1) + hX));
    return lhs == b.geF.truncated(lhs.order());
}

long conventional_weight(const std::string& name) {
    if (name.size() == 3 && (name[0] == 'a' || name[0] == 'b') &&
        std::isdigit(static_cast<unsigned char>(name[1])) &&
        std::isdigit(static_cast<unsigned char>(name[2]))) {
        long i = name[1] - '0', j = name[2] - '0';
        long w = i + j - 1;
        if (w >= 1) return w;
    }
    if (name.size() >= 2 && name[0] == 'c') {
        bool digits = true;
        for (size_t i = 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) { digits = false; break; }
        if (digits) {
            long v = std::stol(name.substr(1));
            if (v >= 1 && v % 2 == 1) return v;
        }
    }
    throw UnconventionalName("no conventional weight for parameter '" + name + "'");
}

WeightMap assign_weights(const PlanarSystem& s) {
    WeightMap w;
    for (const auto& p : s.parameters()) w.w[p] = conventional_weight(p);
    return w;
}

bool check_sys_weighted_homogeneous(const ConditionSet& cs, const WeightMap& w) {
    for (const auto& p : cs.polys)
        if (!p.weighted_degree(w).homogeneous) return false;
    return true;
}

NormalizedSystem normalize_b20(const PlanarSystem& s) {
    if (s.shape() != PlanarSystem::Shape::Case1)
        throw MalformedSystem("normalize_b20 applies to Case 1 systems");
    PolyFraction b20 = PolyFraction(s.B().num.coefficient_of("x", 2), s.B().den);
    Rational lambda;
    if (!b20.is_polynomial() || !b20.as_polynomial().is_rational_constant(lambda))
        throw MalformedSystem("the x^2-coefficient must be a rational constant to rescale");
    if (rat_is_zero(lambda)) return NormalizedSystem{s, Rational(1)};

    const VarContext& ctx = s.slot_context();
    Rational inv(lambda.get_den(), lambda.get_num());
    inv.canonicalize();
    std::map<std::string, Binding> shrink{{"x", Binding(ParamPoly::variable(ctx, "x").scaled(inv))}};
    auto sub = [&](const PolyFraction& f, const Rational& post) {
        return PolyFraction(f.num.substitute_exact(shrink).scaled(post), f.den);
    };
    // (x,y) -> (x/l, y/l): A*(x) = A(x/l), B*(x) = l B(x/l), C*(x) = C(x/l)/l
    PlanarSystem out = PlanarSystem::case1(sub(s.A(), Rational(1)), sub(s.B(), lambda),
                                           sub(s.C(), inv), s.parameters());
    return NormalizedSystem{std::move(out), lambda};
}

PlanarSystem denormalize_b20(const PlanarSystem& s, const Rational& scale) {
    if (s.shape() != PlanarSystem::Shape::Case1)
        throw MalformedSystem("denormalize_b20 applies to Case 1 systems");
    const VarContext& ctx = s.slot_context();
    Rational inv(scale.get_den(), scale.get_num());
    inv.canonicalize();
    std::map<std::string, Binding> grow{{"x", Binding(ParamPoly::variable(ctx, "x").scaled(scale))}};
    auto sub = [&](const PolyFraction& f, const Rational& post) {
        return PolyFraction(f.num.substitute_exact(grow).scaled(post), f.den);
    };
    return PlanarSystem::case1(sub(s.A(), Rational(1)), sub(s.B(), inv), sub(s.C(), scale),
                               s.parameters());
}

} // namespace isochron
