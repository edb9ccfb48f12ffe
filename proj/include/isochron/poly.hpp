#ifndef ISOCHRON_POLY_HPP
#define ISOCHRON_POLY_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isochron/bigfloat.hpp"
#include "isochron/errors.hpp"
#include "isochron/rational.hpp"

namespace isochron {

// Frozen, ordered variable list shared by all polynomials of one computation.
class VarContext {
public:
    VarContext() : data_(shared_empty()) {}
    static VarContext make(std::vector<std::string> names);

    int size() const { return static_cast<int>(data_->names.size()); }
    const std::string& name(int i) const { return data_->names[static_cast<size_t>(i)]; }
    const std::vector<std::string>& names() const { return data_->names; }
    int index_of(const std::string& n) const;   // -1 when absent
    bool contains(const std::string& n) const { return index_of(n) >= 0; }

    VarContext extended(const std::vector<std::string>& extra) const;

    friend bool operator==(const VarContext& a, const VarContext& b) {
        return a.data_ == b.data_ || a.data_->names == b.data_->names;
    }
    friend bool operator!=(const VarContext& a, const VarContext& b) { return !(a == b); }

private:
    struct Data { std::vector<std::string> names; };
    static std::shared_ptr<const Data> shared_empty();
    std::shared_ptr<const Data> data_;
};

// Exponent vector over a context. Inline storage; degrees in this project are
// tiny, contexts have at most kMaxVars variables.
struct Monomial {
    static constexpr int kMaxVars = 16;
    int16_t e[kMaxVars] = {0};
    int16_t n = 0;

    static Monomial one(int nvars) { Monomial m; m.n = static_cast<int16_t>(nvars); return m; }
    long total_degree() const {
        long d = 0;
        for (int i = 0; i < n; ++i) d += e[i];
        return d;
    }
    bool is_one() const {
        for (int i = 0; i < n; ++i) if (e[i] != 0) return false;
        return true;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        if (a.n != b.n) return false;
        for (int i = 0; i < a.n; ++i) if (a.e[i] != b.e[i]) return false;
        return true;
    }
};

enum class MonomialOrder { DRL, Lex };

// Total order; +1 when a > b. DRL compares total degree first, ties broken by
// the reversed sign of the last nonzero entry of a-b.
int monomial_compare(const Monomial& a, const Monomial& b, MonomialOrder order);

struct MonomialHash {
    size_t operator()(const Monomial& m) const {
        size_t h = 1469598103934665603ULL;
        for (int i = 0; i < m.n; ++i)
            h = (h ^ static_cast<size_t>(static_cast<uint16_t>(m.e[i]))) * 1099511628211ULL;
        return h;
    }
};

struct Term {
    Monomial m;
    Rational c;
};

// parameter name -> positive integer weight
struct WeightMap {
    std::map<std::string, long> w;
};

struct WeightedDegree {
    bool homogeneous = false;
    long degree = 0;   // meaningful when homogeneous
};

class ParamPoly;
using Binding = std::variant<Rational, ParamPoly, BigFloat>;
using SubstResult = std::variant<ParamPoly, BigFloat>;

// Sparse multivariate polynomial over Q. Terms stay sorted DRL-descending,
// zero coefficients are never stored.
class ParamPoly {
public:
    ParamPoly() = default;
    explicit ParamPoly(VarContext ctx) : ctx_(std::move(ctx)) {}

    static ParamPoly zero(const VarContext& ctx) { return ParamPoly(ctx); }
    static ParamPoly constant(const VarContext& ctx, Rational c);
    static ParamPoly variable(const VarContext& ctx, const std::string& name, long exponent = 1);
    static ParamPoly from_term(const VarContext& ctx, Monomial m, Rational c);

    const VarContext& context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
    Rational constant_value() const;      // the coefficient of 1 (0 if absent)
    bool is_rational_constant(Rational& out) const;   // true iff no variables occur

    long total_degree() const;
    long degree_in(const std::string& var) const;
    const Monomial& leading_monomial(MonomialOrder order = MonomialOrder::DRL) const;
    const Rational& leading_coeff(MonomialOrder order = MonomialOrder::DRL) const;

    friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b);
    friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b);
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
    ParamPoly operator-() const;
    ParamPoly scaled(const Rational& c) const;
    ParamPoly pow(long e) const;

    friend bool operator==(const ParamPoly& a, const ParamPoly& b);
    friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

    ParamPoly differentiate(const std::string& var) const;

    // Partial substitution by rationals and/or polynomials (exact result).
    ParamPoly substitute_exact(const std::map<std::string, Binding>& bindings) const;
    // Numeric evaluation; every variable occurring in the polynomial must be
    // bound (rational bindings are converted at the working precision).
    BigFloat evaluate_bigfloat(const std::map<std::string, Binding>& bindings,
                               mpfr_prec_t prec = BigFloat::kDefaultPrec) const;

    WeightedDegree weighted_degree(const WeightMap& w) const;

    // Integer-coefficient, content-1, positive DRL-leading-coefficient copy.
    ParamPoly primitive_part() const;

    // Coefficient of var^k, as a polynomial in the remaining variables
    // (still expressed over the same context).
    ParamPoly coefficient_of(const std::string& var, long k) const;

    // Re-express over `target`; every variable that actually occurs must
    // exist in the target context.
    ParamPoly project_to(const VarContext& target) const;

    std::string to_string() const;

private:
    void sort_normalize();    // sort DRL-desc, merge, drop zeros
    VarContext ctx_;
    std::vector<Term> terms_;
    friend class PolyBuilder;
};

// Spec-level substitute: exact when all bindings are rational/polynomial;
// any BigFloat binding switches to numeric mode (all variables must bind).
SubstResult substitute(const ParamPoly& p, const std::map<std::string, Binding>& bindings,
                       mpfr_prec_t prec = BigFloat::kDefaultPrec);

// add/sub/mul behind one dispatch point.
enum class PolyOp { Add, Sub, Mul };
ParamPoly poly_arith(const ParamPoly& a, const ParamPoly& b, PolyOp op);

// Incremental construction without resorting on every insert.
class PolyBuilder {
public:
    explicit PolyBuilder(VarContext ctx) : ctx_(std::move(ctx)) {}
    void add(const Monomial& m, const Rational& c);
    ParamPoly build();
private:
    VarContext ctx_;
    std::vector<Term> terms_;
};

} // namespace isochron

#endif
