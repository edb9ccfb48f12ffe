#include <doctest.h>

#include "isochron/calgorithm.hpp"
#include "isochron/parse.hpp"

using namespace isochron;

namespace {

PlanarSystem make_system(const std::string& xdot, const std::string& ydot,
                         const std::vector<std::string>& params) {
    std::vector<std::string> names = {"x", "y"};
    for (const auto& p : params) names.push_back(p);
    auto ctx = VarContext::make(names);
    return PlanarSystem::from_components(parse_ratfun_in(xdot, ctx), parse_ratfun_in(ydot, ctx),
                                         params);
}

PlanarSystem loud() {
    return make_system("-y + a*x*y", "x + b*y^2 + c*x^2", {"a", "b", "c"});
}

PlanarSystem quadratic_family(int n) {
    std::string xd = "-y + a*x^" + std::to_string(n - 1) + "*y";
    std::string yd = "x + b*x^" + std::to_string(n - 2) + "*y^2 + c*x^" + std::to_string(n);
    return make_system(xd, yd, {"a", "b", "c"});
}

PlanarSystem abel9() {
    std::string yd = "x";
    for (int i = 1; i <= 9; ++i) yd += " + a" + std::to_string(i) + "*x*y^" + std::to_string(i);
    std::vector<std::string> params;
    for (int i = 1; i <= 9; ++i) params.push_back("a" + std::to_string(i));
    return make_system("-y", yd, params);
}

std::map<std::string, Binding> abel_point(const Rational& a) {
    std::map<std::string, Binding> pt;
    pt["a1"] = Binding(a);
    pt["a2"] = Binding(a * a / 3);
    pt["a3"] = Binding(a * a * a / 27);
    for (int i = 4; i <= 9; ++i) pt["a" + std::to_string(i)] = Binding(Rational(0));
    return pt;
}

} // namespace

TEST_CASE("quadratic family: 3 c1 = a - 2c - b") {
    auto r = generate_sys(loud(), 2);
    REQUIRE(r.urabe.phi.count(1));
    const ParamPoly& c1 = r.urabe.phi.at(1);
    auto ctx = c1.context();
    ParamPoly a = ParamPoly::variable(ctx, "a"), b = ParamPoly::variable(ctx, "b"),
              c = ParamPoly::variable(ctx, "c");
    CHECK(c1.scaled(Rational(3)) == a - c.scaled(Rational(2)) - b);

    // the derivation records are structurally sound
    REQUIRE(!r.derivation.records.empty());
    CHECK(r.derivation.records[0].kind == ConditionRecord::Kind::Trivial);
    CHECK(r.derivation.records[0].index == 1);
    CHECK(r.derivation.records[1].kind == ConditionRecord::Kind::Eliminated);
}

TEST_CASE("homogeneous families n=3,4: c1 = 0") {
    for (int n : {3, 4}) {
        auto r = generate_sys(quadratic_family(n), 2);
        REQUIRE(r.urabe.phi.count(1));
        CHECK(r.urabe.phi.at(1).is_zero());
    }
}

TEST_CASE("the four quadratic isochronous points pass at m=5") {
    struct Point { Rational a, b, c, expect_c1; };
    std::vector<Point> pts = {{Rational(1), Rational(1), Rational(0), Rational(0)},
                              {Rational(1, 2), Rational(1), Rational(-1, 4), Rational(0)},
                              {Rational(2), Rational(1), Rational(-1), Rational(1)},
                              {Rational(1), Rational(1, 4), Rational(0), Rational(1, 4)}};
    for (const auto& p : pts) {
        std::map<std::string, Binding> at{{"a", Binding(p.a)}, {"b", Binding(p.b)},
                                          {"c", Binding(p.c)}};
        auto rep = verify_candidate(loud(), at, 5);
        CHECK(rep.pass);
        REQUIRE(rep.urabe.count(1));
        CHECK(*rep.urabe.at(1).exact == p.expect_c1);
    }
    // a non-isochronous point fails with a nonzero residual
    std::map<std::string, Binding> bad{{"a", Binding(Rational(1))}, {"b", Binding(Rational(0))},
                                       {"c", Binding(Rational(0))}};
    auto rep = verify_candidate(loud(), bad, 3);
    CHECK_FALSE(rep.pass);
    bool some_nonzero = false;
    for (const auto& e : rep.residuals) some_nonzero = some_nonzero || !e.zero;
    CHECK(some_nonzero);
}

TEST_CASE("abel family: the one-parameter point passes at m=6") {
    for (long av : {1L, 2L}) {
        auto rep = verify_candidate(abel9(), abel_point(Rational(av)), 6);
        CHECK(rep.pass);
        CHECK(*rep.urabe.at(1).exact == Rational(-av, 3));
        CHECK(*rep.urabe.at(3).exact == 0);
        CHECK(*rep.urabe.at(5).exact == 0);
    }
    // perturbing a4 destroys it
    auto pt = abel_point(Rational(2));
    pt["a4"] = Binding(Rational(1, 10));
    auto rep = verify_candidate(abel9(), pt, 6);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("bigfloat-mode verify_candidate") {
    // bind a by a bigfloat at an isochronous point: residuals below 1e-40
    std::map<std::string, Binding> at{{"a", Binding(BigFloat(Rational(2)))},
                                      {"b", Binding(Rational(1))}, {"c", Binding(Rational(-1))}};
    auto rep = verify_candidate(loud(), at, 4);
    CHECK(rep.pass);
    REQUIRE(rep.urabe.count(1));
    CHECK(rep.urabe.at(1).numeric.has_value());
    std::map<std::string, Binding> missing{{"a", Binding(Rational(1))}};
    CHECK_THROWS_AS(verify_candidate(loud(), missing, 3), UnboundParameter);
}

TEST_CASE("Sys(m) is nested in Sys(m+1)") {
    for (int m = 1; m <= 3; ++m) {
        auto small = generate_sys(loud(), m);
        auto big = generate_sys(loud(), m + 1);
        for (const auto& p : small.conditions.polys) {
            bool found = false;
            for (const auto& q : big.conditions.polys) found = found || (q == p);
            CHECK(found);
        }
    }
}

TEST_CASE("truncation cross-check") {
    GenerateOptions opt;
    opt.cross_check = true;
    CHECK_NOTHROW(generate_sys(loud(), 3, opt));
    CHECK_NOTHROW(generate_sys(abel9().bind({{"a4", Rational(1, 10)},
                                             {"a5", Rational(0)}, {"a6", Rational(0)},
                                             {"a7", Rational(0)}, {"a8", Rational(0)},
                                             {"a9", Rational(0)}}),
                               3, opt));
}

TEST_CASE("urabe closed-form series identity") {
    // rescaled family at n=4, h(X) = X^3/sqrt(1+X^6), order 40
    PlanarSystem s20 = make_system("-y + 2*x^3*y", "x + x^2*y^2 - x^4", {});
    LienardForm l = reduce_to_lienard(s20);
    auto ctx = s20.slot_context();
    auto h = UrabeClosedForm::make(ParamPoly::constant(ctx, 1), Rational(1),
                                   ParamPoly::constant(ctx, 1), 3);
    CHECK(urabe_series_check(l, h, 40));
    auto hneg = UrabeClosedForm::make(ParamPoly::constant(ctx, -1), Rational(1),
                                      ParamPoly::constant(ctx, 1), 3);
    CHECK_FALSE(urabe_series_check(l, hneg, 40));

    // a zero-Urabe family passes with h = 0
    PlanarSystem s17 = make_system("-y + x^3*y", "x + x^2*y^2", {});
    auto ctx17 = s17.slot_context();
    auto hzero = UrabeClosedForm::make(ParamPoly::zero(ctx17), Rational(1),
                                       ParamPoly::zero(ctx17), 1);
    CHECK(urabe_series_check(reduce_to_lienard(s17), hzero, 30));

    CHECK_THROWS_AS(UrabeClosedForm::make(ParamPoly::constant(ctx, 1), Rational(-1),
                                          ParamPoly::constant(ctx, 1), 3),
                    NonPositiveK2);
    // k2 = 4 folds exactly: k1/2, k3/4
    auto h4 = UrabeClosedForm::make(ParamPoly::constant(ctx, 2), Rational(4),
                                    ParamPoly::constant(ctx, 4), 3);
    CHECK(h4.k1 == ParamPoly::constant(ctx, 1));
    CHECK(h4.k3 == ParamPoly::constant(ctx, 1));
}

TEST_CASE("weights") {
    CHECK(conventional_weight("a21") == 2);
    CHECK(conventional_weight("b02") == 1);
    CHECK(conventional_weight("c5") == 5);
    CHECK_THROWS_AS(conventional_weight("q7"), UnconventionalName);
    CHECK_THROWS_AS(conventional_weight("c4"), UnconventionalName);

    PlanarSystem s = make_system("-y + a11*x*y", "x + b20*x^2 + b02*y^2", {"a11", "b20", "b02"});
    WeightMap w = assign_weights(s);
    CHECK(w.w.at("a11") == 1);
    CHECK(w.w.at("b20") == 1);

    auto ctx = VarContext::make({"a11", "b30"});
    ConditionSet cs;
    cs.polys.push_back(ParamPoly::variable(ctx, "a11") + ParamPoly::variable(ctx, "b30"));
    WeightMap w2;
    w2.w = {{"a11", 1}, {"b30", 2}};
    CHECK_FALSE(check_sys_weighted_homogeneous(cs, w2));
    cs.polys[0] = ParamPoly::variable(ctx, "a11", 2) + ParamPoly::variable(ctx, "b30");
    CHECK(check_sys_weighted_homogeneous(cs, w2));
}

TEST_CASE("normalize_b20") {
    // x^2-coefficient 3 rescales away; parameters ride along
    PlanarSystem s = make_system("-y + a11*x*y", "x + 3*x^2 + b02*y^2", {"a11", "b02"});
    NormalizedSystem ns = normalize_b20(s);
    CHECK(ns.scale == 3);
    CHECK(ns.system.B().num.coefficient_of("x", 2) == ns.system.B().den);
    // the xy-coefficient of xdot becomes a11/3
    auto ctx = ns.system.slot_context();
    ParamPoly Adiff = ns.system.A().num.coefficient_of("x", 1).scaled(Rational(-1));
    CHECK(Adiff == ParamPoly::variable(ctx, "a11").scaled(Rational(1, 3)) * ns.system.A().den);
    // round-trip
    PlanarSystem back = denormalize_b20(ns.system, ns.scale);
    CHECK(back.B().num == s.B().num);
    CHECK(back.A().num == s.A().num);
    CHECK(back.C().num == s.C().num);
    // already normalized: unchanged
    PlanarSystem t = make_system("-y", "x + x^2", {});
    NormalizedSystem nt = normalize_b20(t);
    CHECK(nt.scale == 1);
    CHECK(nt.system.B().num == t.B().num);
}

TEST_CASE("generated conditions of the homogeneous quartic family are homogeneous") {
    auto r = generate_sys(quadratic_family(4), 4);
    WeightMap w;
    w.w = {{"a", 1}, {"b", 1}, {"c", 1}};
    for (const auto& p : r.conditions.polys) CHECK(p.weighted_degree(w).homogeneous);
    CHECK(!r.conditions.polys.empty());
}
