#include "isochron/poly.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace isochron {

std::shared_ptr<const VarContext::Data> VarContext::shared_empty() {
    static const auto e = std::make_shared<const Data>();
    return e;
}

VarContext VarContext::make(std::vector<std::string> names) {
    if (names.size() > static_cast<size_t>(Monomial::kMaxVars))
        throw VariableContextMismatch("too many variables for a context (max 16)");
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw VariableContextMismatch("duplicate variable name: " + names[i]);
    VarContext c;
    auto d = std::make_shared<Data>();
    d->names = std::move(names);
    c.data_ = d;
    return c;
}

int VarContext::index_of(const std::string& n) const {
    const auto& v = data_->names;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] == n) return static_cast<int>(i);
    return -1;
}

VarContext VarContext::extended(const std::vector<std::string>& extra) const {
    std::vector<std::string> names = data_->names;
    for (const auto& n : extra)
        if (index_of(n) < 0) names.push_back(n);
    return make(std::move(names));
}

int monomial_compare(const Monomial& a, const Monomial& b, MonomialOrder order) {
    if (a.n != b.n) throw LengthMismatch("monomial_compare: exponent vectors of different length");
    if (order == MonomialOrder::Lex) {
        for (int i = 0; i < a.n; ++i) {
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
        }
        return 0;
    }
    long da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db ? 1 : -1;
    for (int i = a.n - 1; i >= 0; --i) {
        int d = a.e[i] - b.e[i];
        if (d != 0) return d < 0 ? 1 : -1;
    }
    return 0;
}

namespace {

struct DRLDescending {
    bool operator()(const Term& x, const Term& y) const {
        return monomial_compare(x.m, y.m, MonomialOrder::DRL) > 0;
    }
};

Monomial mul_monomials(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.n = a.n;
    for (int i = 0; i < a.n; ++i) {
        int32_t s = static_cast<int32_t>(a.e[i]) + b.e[i];
        if (s > INT16_MAX) throw ExponentOverflow();
        r.e[i] = static_cast<int16_t>(s);
    }
    return r;
}

} // namespace

ParamPoly ParamPoly::constant(const VarContext& ctx, Rational c) {
    ParamPoly p(ctx);
    if (!rat_is_zero(c)) p.terms_.push_back({Monomial::one(ctx.size()), std::move(c)});
    return p;
}

ParamPoly ParamPoly::variable(const VarContext& ctx, const std::string& name, long exponent) {
    int i = ctx.index_of(name);
    if (i < 0) throw UnknownVariable("unknown variable: " + name);
    if (exponent < 0) throw NegativeExponent();
    if (exponent > INT16_MAX) throw ExponentOverflow();
    Monomial m = Monomial::one(ctx.size());
    m.e[i] = static_cast<int16_t>(exponent);
    return from_term(ctx, m, 1);
}

ParamPoly ParamPoly::from_term(const VarContext& ctx, Monomial m, Rational c) {
    ParamPoly p(ctx);
    if (!rat_is_zero(c)) p.terms_.push_back({m, std::move(c)});
    return p;
}

Rational ParamPoly::constant_value() const {
    for (const auto& t : terms_)
        if (t.m.is_one()) return t.c;
    return Rational(0);
}

bool ParamPoly::is_rational_constant(Rational& out) const {
    if (terms_.empty()) { out = 0; return true; }
    if (terms_.size() == 1 && terms_[0].m.is_one()) { out = terms_[0].c; return true; }
    return false;
}

long ParamPoly::total_degree() const {
    long d = 0;
    for (const auto& t : terms_) d = std::max(d, t.m.total_degree());
    return d;
}

long ParamPoly::degree_in(const std::string& var) const {
    int i = ctx_.index_of(var);
    if (i < 0) throw UnknownVariable("unknown variable: " + var);
    long d = 0;
    for (const auto& t : terms_) d = std::max<long>(d, t.m.e[i]);
    return d;
}

const Monomial& ParamPoly::leading_monomial(MonomialOrder order) const {
    if (terms_.empty()) throw ZeroPolynomial("leading_monomial of zero polynomial");
    if (order == MonomialOrder::DRL) return terms_.front().m;
    const Term* best = &terms_[0];
    for (const auto& t : terms_)
        if (monomial_compare(t.m, best->m, order) > 0) best = &t;
    return best->m;
}

const Rational& ParamPoly::leading_coeff(MonomialOrder order) const {
    if (terms_.empty()) throw ZeroPolynomial("leading_coeff of zero polynomial");
    if (order == MonomialOrder::DRL) return terms_.front().c;
    const Term* best = &terms_[0];
    for (const auto& t : terms_)
        if (monomial_compare(t.m, best->m, order) > 0) best = &t;
    return best->c;
}

void ParamPoly::sort_normalize() {
    std::sort(terms_.begin(), terms_.end(), DRLDescending{});
    size_t out = 0;
    for (size_t i = 0; i < terms_.size();) {
        size_t j = i + 1;
        while (j < terms_.size() && terms_[j].m == terms_[i].m) {
            terms_[i].c += terms_[j].c;
            ++j;
        }
        if (!rat_is_zero(terms_[i].c)) {
            if (out != i) terms_[out] = std::move(terms_[i]);
            ++out;
        }
        i = j;
    }
    terms_.resize(out);
}

ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
    if (a.ctx_ != b.ctx_) throw VariableContextMismatch();
    ParamPoly r(a.ctx_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
        int c = monomial_compare(a.terms_[i].m, b.terms_[j].m, MonomialOrder::DRL);
        if (c > 0) r.terms_.push_back(a.terms_[i++]);
        else if (c < 0) r.terms_.push_back(b.terms_[j++]);
        else {
            Rational s = a.terms_[i].c + b.terms_[j].c;
            if (!rat_is_zero(s)) r.terms_.push_back({a.terms_[i].m, std::move(s)});
            ++i; ++j;
        }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
    return r;
}

ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) { return a + (-b); }

ParamPoly ParamPoly::operator-() const {
    ParamPoly r(*this);
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
}

ParamPoly ParamPoly::scaled(const Rational& c) const {
    if (rat_is_zero(c)) return ParamPoly(ctx_);
    ParamPoly r(*this);
    for (auto& t : r.terms_) t.c *= c;
    return r;
}

namespace {

// Scale the coefficients of `p` to integers: out[i] = num_i * (L / den_i)
// where L is the lcm of all denominators.
mpz_class integerize(const std::vector<Term>& terms, std::vector<mpz_class>& out) {
    mpz_class L = 1;
    for (const auto& t : terms) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), t.c.get_den().get_mpz_t());
    out.clear();
    out.reserve(terms.size());
    mpz_class q;
    for (const auto& t : terms) {
        mpz_divexact(q.get_mpz_t(), L.get_mpz_t(), t.c.get_den().get_mpz_t());
        out.push_back(q * t.c.get_num());
    }
    return L;
}

// 6 bits per exponent; usable when <= 10 variables and every per-variable
// exponent sum stays below 64.
bool packable_product(const ParamPoly& a, const ParamPoly& b) {
    int n = a.context().size();
    if (n > 10) return false;
    int16_t amax[10] = {0}, bmax[10] = {0};
    for (const auto& t : a.terms())
        for (int i = 0; i < n; ++i) amax[i] = std::max(amax[i], t.m.e[i]);
    for (const auto& t : b.terms())
        for (int i = 0; i < n; ++i) bmax[i] = std::max(bmax[i], t.m.e[i]);
    for (int i = 0; i < n; ++i)
        if (amax[i] + bmax[i] >= 64) return false;
    return true;
}

inline uint64_t pack_monomial(const Monomial& m) {
    uint64_t k = 0;
    for (int i = 0; i < m.n; ++i) k |= static_cast<uint64_t>(m.e[i]) << (6 * i);
    return k;
}

inline Monomial unpack_monomial(uint64_t k, int n) {
    Monomial m = Monomial::one(n);
    for (int i = 0; i < n; ++i) m.e[i] = static_cast<int16_t>((k >> (6 * i)) & 0x3f);
    return m;
}

struct U64Hash {
    size_t operator()(uint64_t k) const {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<size_t>(k);
    }
};

} // namespace

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
    if (a.ctx_ != b.ctx_) throw VariableContextMismatch();
    ParamPoly r(a.ctx_);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    if (a.terms_.size() == 1 && a.terms_[0].m.is_one()) return b.scaled(a.terms_[0].c);
    if (b.terms_.size() == 1 && b.terms_[0].m.is_one()) return a.scaled(b.terms_[0].c);

    // integer-coefficient convolution over the common denominator
    std::vector<mpz_class> ai, bi;
    mpz_class La = integerize(a.terms_, ai);
    mpz_class Lb = integerize(b.terms_, bi);
    mpz_class D = La * Lb;

    if (packable_product(a, b)) {
        std::vector<uint64_t> ka(a.terms_.size()), kb(b.terms_.size());
        for (size_t i = 0; i < a.terms_.size(); ++i) ka[i] = pack_monomial(a.terms_[i].m);
        for (size_t j = 0; j < b.terms_.size(); ++j) kb[j] = pack_monomial(b.terms_[j].m);
        std::unordered_map<uint64_t, mpz_class, U64Hash> acc;
        acc.reserve(a.terms_.size() + b.terms_.size() + a.terms_.size() * b.terms_.size() / 8);
        for (size_t i = 0; i < ka.size(); ++i) {
            const mpz_class& ca = ai[i];
            for (size_t j = 0; j < kb.size(); ++j) {
                mpz_class& slot = acc[ka[i] + kb[j]];
                mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), bi[j].get_mpz_t());
            }
        }
        r.terms_.reserve(acc.size());
        int n = a.ctx_.size();
        for (auto& kv : acc) {
            if (sgn(kv.second) == 0) continue;
            Rational c(kv.second, D);
            c.canonicalize();
            r.terms_.push_back({unpack_monomial(kv.first, n), std::move(c)});
        }
    } else {
        std::unordered_map<Monomial, mpz_class, MonomialHash> acc;
        acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 8);
        for (size_t i = 0; i < a.terms_.size(); ++i) {
            const mpz_class& ca = ai[i];
            for (size_t j = 0; j < b.terms_.size(); ++j) {
                mpz_class& slot = acc[mul_monomials(a.terms_[i].m, b.terms_[j].m)];
                mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), bi[j].get_mpz_t());
            }
        }
        r.terms_.reserve(acc.size());
        for (auto& kv : acc) {
            if (sgn(kv.second) == 0) continue;
            Rational c(kv.second, D);
            c.canonicalize();
            r.terms_.push_back({kv.first, std::move(c)});
        }
    }
    std::sort(r.terms_.begin(), r.terms_.end(), DRLDescending{});
    return r;
}

ParamPoly ParamPoly::pow(long e) const {
    if (e < 0) throw NegativeExponent();
    ParamPoly r = ParamPoly::constant(ctx_, 1);
    ParamPoly base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        if (e > 1) base = base * base;
        e >>= 1;
    }
    return r;
}

bool operator==(const ParamPoly& a, const ParamPoly& b) {
    if (a.ctx_ != b.ctx_) throw VariableContextMismatch();
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].m == b.terms_[i].m) || a.terms_[i].c != b.terms_[i].c) return false;
    return true;
}

ParamPoly ParamPoly::differentiate(const std::string& var) const {
    int i = ctx_.index_of(var);
    if (i < 0) throw UnknownVariable("unknown variable: " + var);
    ParamPoly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (t.m.e[i] == 0) continue;
        Term d = t;
        d.c *= Rational(static_cast<long>(t.m.e[i]));
        d.m.e[i] = static_cast<int16_t>(d.m.e[i] - 1);
        r.terms_.push_back(std::move(d));
    }
    r.sort_normalize();
    return r;
}

ParamPoly ParamPoly::substitute_exact(const std::map<std::string, Binding>& bindings) const {
    // resolve bound variable indices once
    std::vector<int> idx;
    std::vector<const Binding*> vals;
    for (const auto& [name, val] : bindings) {
        int i = ctx_.index_of(name);
        if (i < 0) throw UnknownVariable("substitute: unknown variable " + name);
        if (std::holds_alternative<BigFloat>(val))
            throw VariableContextMismatch("substitute_exact cannot take BigFloat bindings");
        if (const auto* pp = std::get_if<ParamPoly>(&val); pp && pp->context() != ctx_)
            throw VariableContextMismatch("substitute: polynomial binding from another context");
        idx.push_back(i);
        vals.push_back(&val);
    }
    ParamPoly acc(ctx_);
    for (const auto& t : terms_) {
        Monomial rest = t.m;
        Rational scalar = t.c;
        ParamPoly factor = ParamPoly::constant(ctx_, 1);
        bool any_poly = false;
        for (size_t k = 0; k < idx.size(); ++k) {
            int i = idx[k];
            long e = rest.e[i];
            if (e == 0) continue;
            rest.e[i] = 0;
            if (const auto* rc = std::get_if<Rational>(vals[k])) {
                scalar *= rat_pow(*rc, e);
            } else {
                factor = factor * std::get<ParamPoly>(*vals[k]).pow(e);
                any_poly = true;
            }
        }
        ParamPoly term = ParamPoly::from_term(ctx_, rest, scalar);
        acc = acc + (any_poly ? term * factor : term);
    }
    return acc;
}

BigFloat ParamPoly::evaluate_bigfloat(const std::map<std::string, Binding>& bindings,
                                      mpfr_prec_t prec) const {
    std::vector<BigFloat> value(static_cast<size_t>(ctx_.size()), BigFloat(0L, prec));
    std::vector<bool> bound(static_cast<size_t>(ctx_.size()), false);
    for (const auto& [name, val] : bindings) {
        int i = ctx_.index_of(name);
        if (i < 0) continue;
        if (const auto* rc = std::get_if<Rational>(&val)) value[i] = BigFloat(*rc, prec);
        else if (const auto* bf = std::get_if<BigFloat>(&val)) value[i] = bf->round_to(prec);
        else throw VariableContextMismatch("evaluate_bigfloat cannot take polynomial bindings");
        bound[i] = true;
    }
    BigFloat acc(0L, prec);
    for (const auto& t : terms_) {
        BigFloat term(t.c, prec);
        for (int i = 0; i < t.m.n; ++i) {
            if (t.m.e[i] == 0) continue;
            if (!bound[static_cast<size_t>(i)])
                throw UnboundVariableInNumericMode("unbound variable in numeric mode: " + ctx_.name(i));
            term *= value[static_cast<size_t>(i)].pow_si(t.m.e[i]);
        }
        acc += term;
    }
    return acc;
}

SubstResult substitute(const ParamPoly& p, const std::map<std::string, Binding>& bindings,
                       mpfr_prec_t prec) {
    bool numeric = false;
    for (const auto& kv : bindings)
        if (std::holds_alternative<BigFloat>(kv.second)) { numeric = true; break; }
    if (!numeric) return p.substitute_exact(bindings);
    return p.evaluate_bigfloat(bindings, prec);
}

ParamPoly poly_arith(const ParamPoly& a, const ParamPoly& b, PolyOp op) {
    switch (op) {
        case PolyOp::Add: return a + b;
        case PolyOp::Sub: return a - b;
        case PolyOp::Mul: return a * b;
    }
    throw EngineError("Internal", "bad PolyOp");
}

WeightedDegree ParamPoly::weighted_degree(const WeightMap& wm) const {
    std::vector<long> w(static_cast<size_t>(ctx_.size()), -1);
    for (int i = 0; i < ctx_.size(); ++i) {
        auto it = wm.w.find(ctx_.name(i));
        if (it != wm.w.end()) w[static_cast<size_t>(i)] = it->second;
    }
    WeightedDegree out;
    bool first = true;
    for (const auto& t : terms_) {
        long d = 0;
        for (int i = 0; i < t.m.n; ++i) {
            if (t.m.e[i] == 0) continue;
            if (w[static_cast<size_t>(i)] < 0)
                throw MissingWeight("no weight for variable " + ctx_.name(i));
            d += w[static_cast<size_t>(i)] * t.m.e[i];
        }
        if (first) { out.degree = d; out.homogeneous = true; first = false; }
        else if (d != out.degree) { out.homogeneous = false; }
    }
    return out;
}

ParamPoly ParamPoly::primitive_part() const {
    if (terms_.empty()) throw ZeroPolynomial("primitive_part of zero polynomial");
    // content = gcd of numerators / lcm of denominators
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& t : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.c.get_den().get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    ParamPoly r = scaled(scale);
    if (sgn(r.leading_coeff(MonomialOrder::DRL)) < 0) r = r.scaled(Rational(-1));
    return r;
}

ParamPoly ParamPoly::coefficient_of(const std::string& var, long k) const {
    int i = ctx_.index_of(var);
    if (i < 0) throw UnknownVariable("unknown variable: " + var);
    ParamPoly r(ctx_);
    for (const auto& t : terms_) {
        if (t.m.e[i] != k) continue;
        Term u = t;
        u.m.e[i] = 0;
        r.terms_.push_back(std::move(u));
    }
    r.sort_normalize();
    return r;
}

ParamPoly ParamPoly::project_to(const VarContext& target) const {
    std::vector<int> map_idx(static_cast<size_t>(ctx_.size()), -1);
    for (int i = 0; i < ctx_.size(); ++i) map_idx[static_cast<size_t>(i)] = target.index_of(ctx_.name(i));
    ParamPoly r(target);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        Monomial m = Monomial::one(target.size());
        for (int i = 0; i < t.m.n; ++i) {
            if (t.m.e[i] == 0) continue;
            int j = map_idx[static_cast<size_t>(i)];
            if (j < 0)
                throw VariableContextMismatch("project_to: variable " + ctx_.name(i) +
                                              " not present in target context");
            m.e[j] = t.m.e[i];
        }
        r.terms_.push_back({m, t.c});
    }
    r.sort_normalize();
    return r;
}

std::string ParamPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.c;
        if (first) {
            if (sgn(c) < 0) { os << "-"; c = -c; }
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
            if (sgn(c) < 0) c = -c;
        }
        first = false;
        bool printed_coeff = false;
        if (!rat_is_one(c) || t.m.is_one()) {
            os << rat_to_string(c);
            printed_coeff = true;
        }
        for (int i = 0; i < t.m.n; ++i) {
            if (t.m.e[i] == 0) continue;
            if (printed_coeff) os << "*";
            printed_coeff = true;
            os << ctx_.name(i);
            if (t.m.e[i] > 1) os << "^" << t.m.e[i];
        }
    }
    return os.str();
}

void PolyBuilder::add(const Monomial& m, const Rational& c) {
    if (!rat_is_zero(c)) terms_.push_back({m, c});
}

ParamPoly PolyBuilder::build() {
    ParamPoly p(ctx_);
    p.terms_ = std::move(terms_);
    p.sort_normalize();
    terms_.clear();
    return p;
}

} // namespace isochron
