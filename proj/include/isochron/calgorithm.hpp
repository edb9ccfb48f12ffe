#ifndef ISOCHRON_CALGORITHM_HPP
#define ISOCHRON_CALGORITHM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochron/lienard.hpp"

namespace isochron {

// One matched Taylor-coefficient index.
struct ConditionRecord {
    enum class Kind { Trivial, Eliminated, Condition };
    int index = 0;
    Kind kind = Kind::Trivial;
    // Eliminated: the solved coefficient as a polynomial in the parameters.
    // Condition: the raw residual (zero polynomial when the index is silent).
    ParamPoly payload;
};

// Full trace of one run: the two matched series plus per-index records.
struct ConditionDerivation {
    int order_m = 0;
    int truncation = 0;
    TruncatedSeries lhs;   // (g e^F)(x(u))
    TruncatedSeries rhs;   // X(u)/(1 + h(X(u))) with eliminated coefficients substituted
    std::vector<ConditionRecord> records;
};

// (2k+1) -> phi_{2k+1}(alpha)
struct UrabeCoefficients {
    std::map<int, ParamPoly> phi;
};

// Normalized necessary conditions: primitive, positive leading coefficient,
// no duplicates (rational multiples collapse).
struct ConditionSet {
    std::vector<ParamPoly> polys;
};

struct GenerateOptions {
    // Recompute at truncation N+2 and require identical output.
    bool cross_check = false;
    // Wall-clock cap in milliseconds; 0 disables the check.
    long time_limit_ms = 0;
};

struct GenerateResult {
    ConditionSet conditions;
    UrabeCoefficients urabe;
    ConditionDerivation derivation;
};

// The iterative Taylor-matching / elimination procedure: matches
// (g e^F)(x(u)) against X(u)/(1+h(X(u))) coefficient by coefficient,
// solving for a new Urabe coefficient at every even index and emitting a
// necessary condition at every odd index >= 3.
GenerateResult generate_sys(const PlanarSystem& s, int m, const GenerateOptions& opt = {});

struct ResidualEntry {
    ParamPoly condition;                  // the condition polynomial (pre-substitution)
    std::optional<Rational> exact;        // set when the point is fully rational
    std::optional<BigFloat> numeric;      // set in bigfloat mode
    bool zero = false;
};

struct CandidateReport {
    bool pass = false;
    int order_m = 0;
    std::vector<ResidualEntry> residuals;
    std::map<int, ResidualEntry> urabe;   // specialized c_{2k+1}
};

// Substitutes the point into Sys(m). Rational entries are folded into the
// system before the run (the elimination commutes with specialization);
// BigFloat entries are substituted into the generated conditions.
CandidateReport verify_candidate(const PlanarSystem& s,
                                 const std::map<std::string, Binding>& point, int m,
                                 long bigfloat_digits = 40);

// h(X) = k1 X^s / sqrt(k2 + k3 X^{2s}), s odd, k2 > 0. Construction rescales
// k2 to 1 (k1/sqrt(k2) must stay rational; all catalog forms have k2 = 1).
struct UrabeClosedForm {
    ParamPoly k1;
    ParamPoly k3;
    long s = 1;

    static UrabeClosedForm make(const ParamPoly& k1, const Rational& k2, const ParamPoly& k3, long s);
};

// Exact series identity X(x)/(1+h(X(x))) == g(x) e^{F(x)} up to `order`.
bool urabe_series_check(const LienardForm& l, const UrabeClosedForm& h, int order);

// i+j-1 for a_ij/b_ij, 2i+1 for c_{2i+1}.
long conventional_weight(const std::string& name);
WeightMap assign_weights(const PlanarSystem& s);

bool check_sys_weighted_homogeneous(const ConditionSet& cs, const WeightMap& w);

struct NormalizedSystem {
    PlanarSystem system;
    Rational scale;   // lambda of (x,y) -> (x/lambda, y/lambda)
};

// Rescale so the x^2-coefficient of B becomes 1. The coefficient must be a
// nonzero rational constant.
NormalizedSystem normalize_b20(const PlanarSystem& s);
PlanarSystem denormalize_b20(const PlanarSystem& s, const Rational& scale);

} // namespace isochron

#endif
