#ifndef ISOCHRON_PARSE_HPP
#define ISOCHRON_PARSE_HPP

#include <string>
#include <vector>

#include "isochron/evalexpr.hpp"
#include "isochron/fraction.hpp"
#include "isochron/poly.hpp"

namespace isochron {

// Polynomial grammar (see docs/grammar.md): integer and p/q literals, names,
// + - * ^ with nonnegative integer exponents, parentheses. Variables must be
// x, y, or a declared parameter. Errors carry 1-based line:column.
ParamPoly parse_poly(const std::string& text, const std::vector<std::string>& params);
// Same grammar, but the resulting polynomial lives in a caller-fixed context.
ParamPoly parse_poly_in(const std::string& text, const VarContext& ctx);

// Rational-function extension of the polynomial grammar ('/' between any
// factors). Used by catalog fixtures; same context discipline as parse_poly_in.
PolyFraction parse_ratfun_in(const std::string& text, const VarContext& ctx);

// Extended closed-form grammar over x, y: adds /, sqrt, tan, arctan, decimal
// literals (parsed exactly as scaled rationals) and rational exponents
// written ^(p/q).
EvalExpr parse_extended(const std::string& text);

// Wrapper pairing the source text with its parsed polynomial.
struct PolyExpr {
    std::string source;
    ParamPoly parsed;
};

PolyExpr parse_poly_expr(const std::string& text, const std::vector<std::string>& params);

} // namespace isochron

#endif
