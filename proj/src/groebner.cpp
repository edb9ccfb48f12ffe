#include "isochron/groebner.hpp"

#include <algorithm>

namespace isochron {

namespace {

bool divides(const Monomial& a, const Monomial& b) {
    for (int i = 0; i < a.n; ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

Monomial mono_quot(const Monomial& a, const Monomial& b) {   // a / b
    Monomial r = a;
    for (int i = 0; i < a.n; ++i) r.e[i] = static_cast<int16_t>(a.e[i] - b.e[i]);
    return r;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (int i = 0; i < a.n; ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
}

bool coprime(const Monomial& a, const Monomial& b) {
    for (int i = 0; i < a.n; ++i)
        if (a.e[i] > 0 && b.e[i] > 0) return false;
    return true;
}

ParamPoly make_monic(const ParamPoly& p, MonomialOrder order) {
    const Rational& lc = p.leading_coeff(order);
    Rational inv(lc.get_den(), lc.get_num());
    inv.canonicalize();
    return p.scaled(inv);
}

// Full reduction of p against basis; every term of the remainder is
// irreducible.
ParamPoly reduce_full(const ParamPoly& p, const std::vector<ParamPoly>& basis,
                      MonomialOrder order) {
    const VarContext& ctx = p.context();
    ParamPoly rem(ctx);
    ParamPoly work = p;
    while (!work.is_zero()) {
        const Monomial& lm = work.leading_monomial(order);
        const Rational& lc = work.leading_coeff(order);
        bool reduced_step = false;
        for (const auto& g : basis) {
            if (g.is_zero()) continue;
            const Monomial& glm = g.leading_monomial(order);
            if (!divides(glm, lm)) continue;
            Rational factor = lc / g.leading_coeff(order);
            ParamPoly t = ParamPoly::from_term(ctx, mono_quot(lm, glm), factor);
            work = work - t * g;
            reduced_step = true;
            break;
        }
        if (!reduced_step) {
            ParamPoly t = ParamPoly::from_term(ctx, lm, lc);
            rem = rem + t;
            work = work - t;
        }
    }
    return rem;
}

ParamPoly s_poly(const ParamPoly& f, const ParamPoly& g, MonomialOrder order) {
    const VarContext& ctx = f.context();
    Monomial l = mono_lcm(f.leading_monomial(order), g.leading_monomial(order));
    ParamPoly tf = ParamPoly::from_term(ctx, mono_quot(l, f.leading_monomial(order)),
                                        Rational(1) / f.leading_coeff(order));
    ParamPoly tg = ParamPoly::from_term(ctx, mono_quot(l, g.leading_monomial(order)),
                                        Rational(1) / g.leading_coeff(order));
    return tf * f - tg * g;
}

} // namespace

GroebnerBasis buchberger(const std::vector<ParamPoly>& gens_in, MonomialOrder order,
                         const GroebnerLimits& limits) {
    if (gens_in.empty()) throw EngineError("UsageError", "buchberger needs at least one generator");
    const VarContext& ctx = gens_in.front().context();

    std::vector<ParamPoly> basis;
    for (const auto& g : gens_in) {
        if (g.context() != ctx) throw VariableContextMismatch("buchberger: mixed contexts");
        if (!g.is_zero()) basis.push_back(make_monic(g, order));
    }
    if (basis.empty()) throw ZeroPolynomial("buchberger: the zero ideal has no basis here");

    struct Pair { size_t i, j; Monomial lcm; long deg; };
    auto pair_less = [order](const Pair& a, const Pair& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        int c = monomial_compare(a.lcm, b.lcm, order);
        if (c != 0) return c < 0;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    std::vector<Pair> queue;
    auto push_pairs_for = [&](size_t jnew) {
        for (size_t i = 0; i < jnew; ++i) {
            const Monomial& a = basis[i].leading_monomial(order);
            const Monomial& b = basis[jnew].leading_monomial(order);
            if (coprime(a, b)) continue;   // product criterion
            Monomial l = mono_lcm(a, b);
            queue.push_back(Pair{i, jnew, l, l.total_degree()});
        }
    };
    for (size_t j = 1; j < basis.size(); ++j) push_pairs_for(j);

    long processed = 0;
    while (!queue.empty()) {
        auto it = std::min_element(queue.begin(), queue.end(), pair_less);
        Pair pr = *it;
        queue.erase(it);
        if (++processed > limits.max_pairs)
            throw ResourceLimit("pair limit exceeded (" + std::to_string(limits.max_pairs) + ")");
        ParamPoly s = s_poly(basis[pr.i], basis[pr.j], order);
        ParamPoly r = reduce_full(s, basis, order);
        if (r.is_zero()) continue;
        if (r.total_degree() > limits.max_degree)
            throw ResourceLimit("degree limit exceeded (" + std::to_string(limits.max_degree) + ")");
        basis.push_back(make_monic(r, order));
        push_pairs_for(basis.size() - 1);
    }

    // minimalize: drop generators whose leading term another one divides
    std::vector<ParamPoly> minimal;
    for (size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const Monomial& mi = basis[i].leading_monomial(order);
            const Monomial& mj = basis[j].leading_monomial(order);
            if (divides(mj, mi) && !(mi == mj && j > i)) redundant = true;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    // fully reduce each generator against the others
    std::vector<ParamPoly> reduced;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<ParamPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        ParamPoly r = others.empty() ? minimal[i] : reduce_full(minimal[i], others, order);
        if (!r.is_zero()) reduced.push_back(r.primitive_part());
    }
    std::sort(reduced.begin(), reduced.end(), [order](const ParamPoly& a, const ParamPoly& b) {
        return monomial_compare(a.leading_monomial(order), b.leading_monomial(order), order) < 0;
    });

    GroebnerBasis out;
    out.gens = std::move(reduced);
    out.order = order;
    out.reduced = true;
    return out;
}

ParamPoly normal_form(const ParamPoly& p, const GroebnerBasis& gb) {
    return reduce_full(p, gb.gens, gb.order);
}

} // namespace isochron
