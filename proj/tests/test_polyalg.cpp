#include <doctest.h>

#include <random>

#include "isochron/poly.hpp"

using namespace isochron;

namespace {

VarContext ctx3() { return VarContext::make({"x", "y", "a"}); }

ParamPoly P(const VarContext& c, const char* name) { return ParamPoly::variable(c, name); }

ParamPoly random_poly(const VarContext& ctx, std::mt19937& rng, int max_terms = 6,
                      int max_deg = 4) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> expo(0, max_deg);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    PolyBuilder b(ctx);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Monomial m = Monomial::one(ctx.size());
        for (int i = 0; i < ctx.size(); ++i) m.e[i] = static_cast<int16_t>(expo(rng));
        b.add(m, rat(num(rng), den(rng)));
    }
    return b.build();
}

} // namespace

TEST_CASE("arithmetic basics") {
    auto c = ctx3();
    ParamPoly x = P(c, "x"), y = P(c, "y"), a = P(c, "a");

    CHECK(poly_arith(x + y, x - y, PolyOp::Add) == x.scaled(Rational(2)));
    // (1 - a x^3)(x + c x^4) with c renamed to y to stay in one context
    ParamPoly one = ParamPoly::constant(c, 1);
    ParamPoly lhs = poly_arith(one - a * x.pow(3), x + y * x.pow(4), PolyOp::Mul);
    ParamPoly expect = x + y * x.pow(4) - a * x.pow(4) - a * y * x.pow(7);
    CHECK(lhs == expect);
    CHECK(poly_arith(x, ParamPoly::zero(c), PolyOp::Mul).is_zero());
    CHECK_THROWS_AS(poly_arith(x, P(VarContext::make({"x"}), "x"), PolyOp::Add),
                    VariableContextMismatch);
}

TEST_CASE("differentiate") {
    auto c = ctx3();
    ParamPoly x = P(c, "x"), y = P(c, "y"), a = P(c, "a");
    CHECK((x.pow(2) * y).differentiate("x") == x.scaled(Rational(2)) * y);
    CHECK((a * x.pow(4)).differentiate("x") == a.scaled(Rational(4)) * x.pow(3));
    CHECK(x.pow(2).differentiate("y").is_zero());
    CHECK_THROWS_AS(x.differentiate("zz"), UnknownVariable);
}

TEST_CASE("substitute") {
    auto c = ctx3();
    ParamPoly x = P(c, "x"), y = P(c, "y");
    // x^2+y^2 at (3,4) -> 25
    ParamPoly p = x.pow(2) + y.pow(2);
    auto r = substitute(p, {{"x", Binding(Rational(3))}, {"y", Binding(Rational(4))}});
    Rational v;
    CHECK(std::get<ParamPoly>(r).is_rational_constant(v));
    CHECK(v == 25);
    // polynomial binding: x -> y+1
    ParamPoly one = ParamPoly::constant(c, 1);
    auto r2 = std::get<ParamPoly>(substitute(p, {{"x", Binding(y + one)}}));
    CHECK(r2 == y.pow(2).scaled(Rational(2)) + y.scaled(Rational(2)) + one);
    // bigfloat mode requires all variables bound
    CHECK_THROWS_AS(substitute(p, {{"x", Binding(BigFloat(1.5))}}), UnboundVariableInNumericMode);
    auto r3 = substitute(p, {{"x", Binding(BigFloat(1.5))}, {"y", Binding(Rational(2))}});
    CHECK(std::get<BigFloat>(r3).to_double() == doctest::Approx(1.5 * 1.5 + 4).epsilon(1e-14));
}

TEST_CASE("substitute is a ring homomorphism on random pairs") {
    auto c = ctx3();
    std::mt19937 rng(7);
    std::map<std::string, Binding> at{{"x", Binding(Rational(2, 3))},
                                      {"y", Binding(Rational(-1, 2))},
                                      {"a", Binding(Rational(5))}};
    for (int i = 0; i < 200; ++i) {
        ParamPoly p = random_poly(c, rng), q = random_poly(c, rng);
        auto vp = std::get<ParamPoly>(substitute(p, at)).constant_value();
        auto vq = std::get<ParamPoly>(substitute(q, at)).constant_value();
        auto vpq = std::get<ParamPoly>(substitute(p * q, at)).constant_value();
        CHECK(vpq == vp * vq);
    }
}

TEST_CASE("ring axioms on random triples") {
    auto c = ctx3();
    std::mt19937 rng(11);
    for (int i = 0; i < 1000; ++i) {
        ParamPoly p = random_poly(c, rng, 4, 3), q = random_poly(c, rng, 4, 3),
                  r = random_poly(c, rng, 4, 3);
        CHECK((p + q) + r == p + (q + r));
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
    }
}

TEST_CASE("product rule on random pairs") {
    auto c = ctx3();
    std::mt19937 rng(13);
    for (int i = 0; i < 300; ++i) {
        ParamPoly p = random_poly(c, rng), q = random_poly(c, rng);
        CHECK((p * q).differentiate("x") ==
              p * q.differentiate("x") + q * p.differentiate("x"));
    }
}

TEST_CASE("weighted degree") {
    auto c = VarContext::make({"a21", "b12", "b30", "a11", "b20", "b02"});
    WeightMap w;
    w.w = {{"a21", 2}, {"b12", 2}, {"b30", 2}, {"a11", 1}, {"b20", 1}, {"b02", 1}};
    ParamPoly a21 = P(c, "a21"), b12 = P(c, "b12"), b30 = P(c, "b30"), a11 = P(c, "a11"),
              b20 = P(c, "b20"), b02 = P(c, "b02");
    ParamPoly p2 = a21.scaled(Rational(3)) - b12.scaled(Rational(3)) + a11.pow(2)
                 - b20 * a11 - b30.scaled(Rational(9)) + b02.pow(2).scaled(Rational(4))
                 - a11 * b02.scaled(Rational(5)) + b20.pow(2).scaled(Rational(10))
                 + b20 * b02.scaled(Rational(10));
    auto wd = p2.weighted_degree(w);
    CHECK(wd.homogeneous);
    CHECK(wd.degree == 2);
    CHECK((a11 * b20 + b30).weighted_degree(w).homogeneous);
    CHECK_FALSE((a11 + b30).weighted_degree(w).homogeneous);
    WeightMap missing;
    CHECK_THROWS_AS(p2.weighted_degree(missing), MissingWeight);
}

TEST_CASE("primitive part") {
    auto c = ctx3();
    ParamPoly x = P(c, "x"), y = P(c, "y"), a = P(c, "a");
    CHECK((x.scaled(Rational(3, 2)) + y.scaled(Rational(3))).primitive_part() ==
          x + y.scaled(Rational(2)));
    CHECK((-x).primitive_part() == x);
    auto cab = VarContext::make({"a", "b"});
    ParamPoly aa = P(cab, "a"), bb = P(cab, "b");
    CHECK((aa.scaled(Rational(6)) - bb.scaled(Rational(4))).primitive_part() ==
          aa.scaled(Rational(3)) - bb.scaled(Rational(2)));
    // the sign normalization tracks the DRL leader of the chosen context
    CHECK((y.scaled(Rational(4)) - a.scaled(Rational(6))).primitive_part() ==
          y.scaled(Rational(2)) - a.scaled(Rational(3)));
    CHECK_THROWS_AS(ParamPoly::zero(c).primitive_part(), ZeroPolynomial);
}

TEST_CASE("monomial orders") {
    // x^2 y vs x y^2 in DRL with x > y
    Monomial a = Monomial::one(2), b = Monomial::one(2);
    a.e[0] = 2; a.e[1] = 1;
    b.e[0] = 1; b.e[1] = 2;
    CHECK(monomial_compare(a, b, MonomialOrder::DRL) > 0);
    Monomial x3 = Monomial::one(2), x2y = Monomial::one(2);
    x3.e[0] = 3;
    x2y.e[0] = 2; x2y.e[1] = 1;
    CHECK(monomial_compare(x3, x2y, MonomialOrder::DRL) > 0);
    CHECK(monomial_compare(a, a, MonomialOrder::DRL) == 0);
    Monomial bad = Monomial::one(3);
    CHECK_THROWS_AS(monomial_compare(a, bad, MonomialOrder::DRL), LengthMismatch);
}

TEST_CASE("monomial order is multiplication-consistent") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> expo(0, 5);
    for (int it = 0; it < 500; ++it) {
        Monomial e1 = Monomial::one(4), e2 = Monomial::one(4), e3 = Monomial::one(4);
        for (int i = 0; i < 4; ++i) {
            e1.e[i] = static_cast<int16_t>(expo(rng));
            e2.e[i] = static_cast<int16_t>(expo(rng));
            e3.e[i] = static_cast<int16_t>(expo(rng));
        }
        for (auto order : {MonomialOrder::DRL, MonomialOrder::Lex}) {
            int before = monomial_compare(e1, e2, order);
            Monomial s1 = e1, s2 = e2;
            for (int i = 0; i < 4; ++i) {
                s1.e[i] = static_cast<int16_t>(s1.e[i] + e3.e[i]);
                s2.e[i] = static_cast<int16_t>(s2.e[i] + e3.e[i]);
            }
            CHECK(monomial_compare(s1, s2, order) == before);
        }
    }
}

TEST_CASE("bigfloat basics") {
    BigFloat a(Rational(1, 3));
    BigFloat b = a * BigFloat(3L);
    CHECK((b - BigFloat(1L)).below_pow2(250));
    // residual scale checks used by the catalog
    CHECK(BigFloat(0L).below_pow10(40));
    CHECK_FALSE(BigFloat(1e-30).below_pow10(40));
    BigFloat tiny(Rational(1), 256);
    for (int i = 0; i < 50; ++i) tiny = tiny * BigFloat(0.1);
    CHECK(tiny.below_pow10(40));
}
