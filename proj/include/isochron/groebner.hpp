#ifndef ISOCHRON_GROEBNER_HPP
#define ISOCHRON_GROEBNER_HPP

#include <vector>

#include "isochron/poly.hpp"

namespace isochron {

struct GroebnerBasis {
    std::vector<ParamPoly> gens;   // normalized: primitive, positive leading coefficient
    MonomialOrder order = MonomialOrder::DRL;
    bool reduced = false;
};

struct GroebnerLimits {
    long max_pairs = 5000;
    long max_degree = 40;
};

// Buchberger with the normal (minimal lcm degree first) pair strategy and the
// coprime-leading-term criterion. Deterministic for fixed inputs. Exceeding a
// limit raises ResourceLimit.
GroebnerBasis buchberger(const std::vector<ParamPoly>& gens,
                         MonomialOrder order = MonomialOrder::DRL,
                         const GroebnerLimits& limits = {});

// Full multivariate division remainder against the basis.
ParamPoly normal_form(const ParamPoly& p, const GroebnerBasis& gb);

} // namespace isochron

#endif
