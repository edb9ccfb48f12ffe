// Acceptance suite: one criterion per invocation (1, 2, 3a, 3b, ..., 11),
// printing a pass/fail line per criterion. Exit code 0 iff the criterion
// holds. Criterion 3b carries a documented defect of the printed source and
// is registered in ctest as an expected failure.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#include "isochron/catalog.hpp"
#include "isochron/groebner.hpp"
#include "isochron/parse.hpp"
#include "isochron/report.hpp"

using namespace isochron;

namespace {

int g_failures = 0;

void line(int crit, const char* tag, bool pass, const std::string& detail) {
    std::printf("criterion %-3d %-28s %s  %s\n", crit, tag, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

PlanarSystem make_system(const std::string& xdot, const std::string& ydot,
                         const std::vector<std::string>& params) {
    std::vector<std::string> names = {"x", "y"};
    for (const auto& p : params) names.push_back(p);
    auto ctx = VarContext::make(names);
    return PlanarSystem::from_components(parse_ratfun_in(xdot, ctx), parse_ratfun_in(ydot, ctx),
                                         params);
}

PlanarSystem quadratic_family(int n) {
    std::string xd = "-y + a*x^" + std::to_string(n - 1) + "*y";
    std::string yd = "x + b*x^" + std::to_string(n - 2) + "*y^2 + c*x^" + std::to_string(n);
    return make_system(xd, yd, {"a", "b", "c"});
}

const char* kP2 =
    "3*a21 - 3*b12 + a11^2 - b20*a11 - 9*b30 + 4*b02^2 - 5*a11*b02 + 10*b20^2 + 10*b20*b02";

const char* kP3 =
    "72*a21^2 + 396*b20*a11*b12 + 90*a11*b02*b12 + 36*a11*b22 + 324*a31*b02"
    " - 36*a21*b12 - 468*b20*a11*a21 + 612*b20*a21*b02 - 4116*a11*b20^2*b02"
    " + 108*b20*a31 - 540*b30*a21 - 324*b40*a11 + 1566*b30*a11*b02 - 288*b20*b22"
    " - 459*b30*a11^2 - 1296*b40*b02 - 306*a21*a11*b02 + 1428*b20*a11^2*b02"
    " + 153*a21*a11^2 - 117*a11^2*b12 - 191*b20*a11^3 + 180*b20*b02*b12"
    " + 43*a11^4 - 2319*b20*a11*b02^2 - 289*a11^3*b02 - 360*b02*b22"
    " - 36*b12^2 - 171*a21*b02^2 + 513*b30*b02^2 + 537*a11^2*b02^2"
    " + 351*b02^2*b12 - 271*a11*b02^3 + 542*b20*b02^3 + 756*b20*b30*b02"
    " + 2268*b20*b30*a11 - 20*b02^4 + 1120*b20^4 + 798*a11^2*b20^2"
    " - 2240*a11*b20^3 - 1512*b20*b40 + 1008*b20^2*a21 - 252*b20^2*b12"
    " + 1806*b20^2*b02^2 + 2240*b20^3*b02";

void criterion1() {
    PlanarSystem sys = Catalog::instantiate_record(Catalog::instance().record("quartic", 0), {});
    auto t0 = std::chrono::steady_clock::now();
    GenerateResult r = generate_sys(sys, 9);
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    VarContext pc = VarContext::make(sys.parameters());
    ParamPoly P2 = parse_poly_in(kP2, pc);
    ParamPoly P3 = parse_poly_in(kP3, pc);

    bool runtime_ok = sec < 300.0;
    line(1, "runtime", runtime_ok, std::to_string(sec) + " s (< 300 s target)");

    bool have = r.conditions.polys.size() >= 2;
    line(1, "condition count", have,
         std::to_string(r.conditions.polys.size()) + " conditions from Sys(9)");
    if (!have) return;

    // first nonzero condition: a positive rational multiple of the printed P2
    const ParamPoly& s1 = r.conditions.polys[0];
    ParamPoly P2n = P2.primitive_part();
    bool p2_ok = (s1 == P2n) && sgn(P2.leading_coeff()) > 0;
    line(1, "first condition = P2", p2_ok, "exact up to a positive rational scalar");

    // second condition: a rational multiple of the printed P3 modulo the first
    // condition (the source normalizes later members against earlier ones; the
    // comparison is canonical in the quotient)
    const ParamPoly& s2 = r.conditions.polys[1];
    GroebnerBasis gb = buchberger({s1});
    ParamPoly n2 = normal_form(s2, gb);
    ParamPoly n3 = normal_form(P3, gb);
    bool p3_ok = false;
    std::string lam = "none";
    if (!n2.is_zero() && !n3.is_zero()) {
        Rational ratio = n2.leading_coeff() / n3.leading_coeff();
        p3_ok = (n2 == n3.scaled(ratio));
        if (p3_ok) lam = rat_to_string(ratio);
    }
    line(1, "second condition = l*P3", p3_ok, "modulo the first condition, l = " + lam);
}

void criterion2() {
    PlanarSystem loud = quadratic_family(2);
    auto r2 = generate_sys(loud, 2);
    auto pc = r2.urabe.phi.at(1).context();
    ParamPoly a = ParamPoly::variable(pc, "a"), b = ParamPoly::variable(pc, "b"),
              c = ParamPoly::variable(pc, "c");
    bool c1ok = r2.urabe.phi.at(1).scaled(Rational(3)) == a - c.scaled(Rational(2)) - b;
    line(2, "n=2: 3c1 = a-2c-b", c1ok, "exact");

    for (int n : {3, 4}) {
        auto rn = generate_sys(quadratic_family(n), 2);
        line(2, n == 3 ? "n=3: c1 = 0" : "n=4: c1 = 0", rn.urabe.phi.at(1).is_zero(), "exact");
    }

    struct Point { const char* tag; Rational a, b, c; };
    const Point pts[] = {{"(a=b, c=0)", 1, 1, 0},
                         {"(a=b/2, c=-b/4)", Rational(1, 2), 1, Rational(-1, 4)},
                         {"(a=2b, c=-b)", 2, 1, -1},
                         {"(b=a/4, c=0)", 1, Rational(1, 4), 0}};
    for (const auto& p : pts) {
        auto rep = verify_candidate(
            loud, {{"a", Binding(p.a)}, {"b", Binding(p.b)}, {"c", Binding(p.c)}}, 5);
        line(2, p.tag, rep.pass, "verify_candidate at m=5");
    }
}

void criterion3a() {
    const auto& cat = Catalog::instance();
    // families (17), (18) for n up to 8, free parameter symbolic
    for (const char* id : {"thm1-case17", "thm1-case18"}) {
        bool ok = true;
        for (long n = 2; n <= 8; ++n) {
            FamilyRecord rec = cat.record(id, n);
            PlanarSystem s = PlanarSystem::from_components(rec.xdot, rec.ydot, rec.params);
            ok = ok && zero_urabe_conditions(s).empty();
        }
        line(3, id, ok, "identically zero for n = 2..8, parameter symbolic");
    }
    // fixed-degree inventory: exact in the free parameters where rational,
    // bigfloat residuals below 1e-40 at the algebraic constants otherwise
    const char* exact_ids[] = {"thm3-caseI", "thm3-caseII", "thm3-caseIII", "thm3-caseIV",
                               "thm3-caseV", "thm4-caseI", "thm4-caseIII", "thm4-caseIV",
                               "thm4-caseVI", "thm5-caseIV", "thm6-caseI", "thm6-caseII",
                               "thm6-caseIII", "thm6-caseIV", "thm6-caseV", "thm6-caseVI",
                               "thm6-caseVII", "thm6-caseVIII"};
    for (const char* id : exact_ids) {
        FamilyRecord rec = cat.record(id, 0);
        PlanarSystem s = PlanarSystem::from_components(rec.xdot, rec.ydot, rec.params);
        line(3, id, zero_urabe_conditions(s).empty(), "identity exact in the free parameters");
    }
    for (const char* id : {"thm5-caseV", "thm5-caseVI", "thm5-caseVII"}) {
        FamilyRecord rec = cat.record(id, 0);
        BatteryReport br = cat.verification_battery(id, rec.default_bindings, 4);
        bool ok = false;
        std::string detail;
        for (const auto& c : br.checks)
            if (c.name == "zero-urabe") { ok = c.status == "pass"; detail = c.detail; }
        line(3, id, ok, detail);
    }
    // case VIII again at a second rational binding
    {
        BatteryReport br = cat.verification_battery(
            "thm6-caseVIII",
            {{"b20", Rational(2)}, {"b30", Rational(1, 2)}, {"b40", Rational(1)},
             {"b12", Rational(-1)}},
            4);
        bool ok = false;
        for (const auto& c : br.checks)
            if (c.name == "zero-urabe") ok = c.status == "pass";
        line(3, "thm6-caseVIII alt point", ok, "rational test bindings");
    }
}

void criterion3b() {
    // the printed Z-family as extracted: the residuals are honestly nonzero
    // (multi-token corruption of the source; the analysis lives in the
    // project notes). This leg is registered as an expected failure.
    const auto& cat = Catalog::instance();
    FamilyRecord rec = cat.record("thm3-caseVI", 0);
    BatteryReport br = cat.verification_battery("thm3-caseVI", rec.default_bindings, 4);
    bool ok = false;
    std::string detail;
    for (const auto& c : br.checks)
        if (c.name == "zero-urabe") { ok = c.status == "pass"; detail = c.detail; }
    line(3, "thm3-caseVI printed text", ok, detail + " [defective source, kept verbatim]");
}

void criterion4() {
    for (int n : {2, 4, 6, 8}) {
        FamilyRecord rec = Catalog::instance().record("thm2-case20", n);
        PlanarSystem s = Catalog::instantiate_record(rec, {{"b", Rational(1)}});
        LienardForm l = reduce_to_lienard(s);
        auto ctx = s.slot_context();
        auto h = UrabeClosedForm::make(ParamPoly::constant(ctx, 1), 1,
                                       ParamPoly::constant(ctx, 1), n - 1);
        bool ok = urabe_series_check(l, h, 60);
        auto hneg = UrabeClosedForm::make(ParamPoly::constant(ctx, -1), 1,
                                          ParamPoly::constant(ctx, 1), n - 1);
        bool neg_fails = !urabe_series_check(l, hneg, 60);
        line(4, ("n=" + std::to_string(n)).c_str(), ok && neg_fails,
             "order 60; negated k1 rejected");
    }
}

void criterion5() {
    const auto& cat = Catalog::instance();
    for (long n : {4L, 6L, 8L}) {
        for (const char* id : {"thm1-case17", "thm1-case18"}) {
            FamilyRecord rec = cat.record(id, n);
            PlanarSystem s = PlanarSystem::from_components(rec.xdot, rec.ydot, rec.params);
            PlanarField f = s.field();
            const VarContext& fc = f.context();
            PowerIntegral H{rec.pintegral->num.project_to(fc), rec.pintegral->base.project_to(fc),
                            rec.pintegral->p, rec.pintegral->q};
            line(5, (std::string(id) + " n=" + std::to_string(n)).c_str(),
                 check_power_integral(H, f), "exact, parameter symbolic");
        }
    }
    bool h20 = true;
    for (long n = 2; n <= 8; ++n) {
        FamilyRecord rec = cat.record("thm2-case20", n);
        PlanarSystem s = PlanarSystem::from_components(rec.xdot, rec.ydot, rec.params);
        PlanarField f = s.field();
        const VarContext& fc = f.context();
        PowerIntegral H{rec.pintegral->num.project_to(fc), rec.pintegral->base.project_to(fc),
                        rec.pintegral->p, rec.pintegral->q};
        h20 = h20 && check_power_integral(H, f);
    }
    line(5, "thm2-case20 n=2..8", h20, "exact, b symbolic");

    FamilyRecord s27 = cat.record("sys27", 0);
    PlanarSystem sys = PlanarSystem::from_components(s27.xdot, s27.ydot, {});
    PlanarField f = sys.field();
    const VarContext& fc = f.context();
    PowerIntegral I27{s27.pintegral->num.project_to(fc), s27.pintegral->base.project_to(fc),
                      s27.pintegral->p, s27.pintegral->q};
    line(5, "I27", check_power_integral(I27, f), "exact");
}

void criterion6() {
    const auto& cat = Catalog::instance();
    for (long n : {4L, 6L, 8L}) {
        for (const char* id : {"thm1-case17", "thm1-case18"}) {
            FamilyRecord rec = cat.record(id, n);
            PlanarSystem s = PlanarSystem::from_components(rec.xdot, rec.ydot, rec.params);
            PlanarField f = s.field();
            const VarContext& fc = f.context();
            LinearizationData L{rec.linearization->M.project_to(fc),
                                rec.linearization->N.project_to(fc),
                                rec.linearization->D.project_to(fc), rec.linearization->p,
                                rec.linearization->q};
            line(6, (std::string(id) + " n=" + std::to_string(n)).c_str(),
                 check_linearization(L, f), "exact, parameter symbolic");
        }
    }
    FamilyRecord s27 = cat.record("sys27", 0);
    CompiledField nf = cat.numeric_field(s27, {});
    bool ok = numeric_linearization_check(nf, s27.uv_linearization->first,
                                          s27.uv_linearization->second, {0.3, 0.0});
    line(6, "tan/arctan pair on (27)", ok, "finite-difference residuals below 1e-6");
}

void criterion7() {
    const auto& cat = Catalog::instance();
    FamilyRecord rec = cat.record("sys27", 0);
    PlanarSystem sys = PlanarSystem::from_components(rec.xdot, rec.ydot, {});
    PlanarField f = sys.field();
    const VarContext& fc = f.context();
    PlanarField Y{rec.commuting->xdot.project_to(fc), rec.commuting->ydot.project_to(fc)};
    PlanarField br = lie_bracket(f, Y);
    line(7, "lie bracket (27),(28)", br.xdot.is_zero() && br.ydot.is_zero(),
         "matches the precomputed oracle result (zero)");
    line(7, "inverse integrating factor", check_inverse_integrating_factor(
             rec.inv_factor->project_to(fc), f), "printed V verified exactly");
}

void criterion8() {
    const auto& cat = Catalog::instance();
    FamilyRecord abel = cat.record("abel9", 0);
    PlanarSystem sys = PlanarSystem::from_components(abel.xdot, abel.ydot, abel.params);
    for (long av : {1L, 2L}) {
        std::map<std::string, Binding> pt;
        Rational a(av);
        pt["a1"] = Binding(a);
        pt["a2"] = Binding(a * a / 3);
        pt["a3"] = Binding(a * a * a / 27);
        for (int i = 4; i <= 9; ++i) pt["a" + std::to_string(i)] = Binding(Rational(0));
        CandidateReport rep = verify_candidate(sys, pt, 6);
        bool cs = rep.pass && *rep.urabe.at(1).exact == Rational(-av, 3) &&
                  rat_is_zero(*rep.urabe.at(3).exact) && rat_is_zero(*rep.urabe.at(5).exact);
        line(8, ("a=" + std::to_string(av) + " symbolic").c_str(), cs,
             "m=6, c1 = -a/3, c3 = c5 = 0 exact");

        std::map<std::string, Rational> nb{{"a1", a}, {"a2", a * a / 3}, {"a3", a * a * a / 27}};
        for (int i = 4; i <= 9; ++i) nb["a" + std::to_string(i)] = 0;
        CompiledField f = cat.numeric_field(abel, nb);
        ScanResult scan = isochronicity_scan(f, {0.1, 0.2, 0.3, 0.4, 0.5});
        char buf[64];
        std::snprintf(buf, sizeof buf, "spread %.2e < 1e-6", scan.spread);
        line(8, ("a=" + std::to_string(av) + " numeric").c_str(), scan.spread < 1e-6, buf);
    }
    // perturbed point fails both ways
    {
        std::map<std::string, Binding> pt;
        Rational a(2);
        pt["a1"] = Binding(a);
        pt["a2"] = Binding(a * a / 3);
        pt["a3"] = Binding(a * a * a / 27);
        pt["a4"] = Binding(Rational(1, 10));
        for (int i = 5; i <= 9; ++i) pt["a" + std::to_string(i)] = Binding(Rational(0));
        CandidateReport rep = verify_candidate(sys, pt, 6);
        line(8, "perturbed symbolic", !rep.pass, "a4 = 1/10 leaves nonzero residuals");

        std::map<std::string, Rational> nb{{"a1", a}, {"a2", a * a / 3}, {"a3", a * a * a / 27},
                                           {"a4", Rational(1, 10)}};
        for (int i = 5; i <= 9; ++i) nb["a" + std::to_string(i)] = 0;
        CompiledField f = cat.numeric_field(abel, nb);
        ScanResult scan = isochronicity_scan(f, {0.1, 0.2, 0.3, 0.4, 0.5});
        char buf[64];
        std::snprintf(buf, sizeof buf, "spread %.2e > 1e-4", scan.spread);
        line(8, "perturbed numeric", scan.spread > 1e-4, buf);
    }
}

void criterion9() {
    PlanarSystem sys = Catalog::instantiate_record(Catalog::instance().record("quartic", 0), {});
    GenerateResult r = generate_sys(sys, 6);
    WeightMap w = assign_weights(sys);
    line(9, "Sys(6) weighted-homog", check_sys_weighted_homogeneous(r.conditions, w),
         std::to_string(r.conditions.polys.size()) + " members");
    ParamPoly P2 = parse_poly_in(kP2, VarContext::make(sys.parameters()));
    auto wd = P2.weighted_degree(w);
    line(9, "P2 weighted degree 2", wd.homogeneous && wd.degree == 2, "by the i+j-1 weights");
}

void criterion10() {
    std::mt19937 rng(2026);
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    auto ctx = VarContext::make({"a", "b"});

    bool series_ok = true;
    for (int it = 0; it < 40 && series_ok; ++it) {
        TruncatedSeries u(ctx, "x", 8);
        u.coeff(1) = ParamPoly::constant(ctx, 1);
        TruncatedSeries e(ctx, "x", 8), s(ctx, "x", 8);
        s.coeff(0) = ParamPoly::constant(ctx, 1);
        for (int k = 2; k < 8; ++k) u.coeff(k) = ParamPoly::constant(ctx, rat(num(rng), den(rng)));
        for (int k = 1; k < 8; ++k) {
            e.coeff(k) = ParamPoly::constant(ctx, rat(num(rng), den(rng)));
            s.coeff(k) = ParamPoly::constant(ctx, rat(num(rng), den(rng)));
        }
        series_ok = series_ok &&
                    series_compose(u, series_revert(u)) == TruncatedSeries::identity(ctx, "x", 8);
        auto root = series_sqrt_unit(s);
        series_ok = series_ok && series_mul(root, root) == s;
        series_ok = series_ok && series_log(series_exp(e)).truncated(7) == e.truncated(7);
    }
    line(10, "powerseries round-trips", series_ok, "revert/compose, sqrt^2, exp/log, 40 cases");

    bool ring_ok = true;
    std::uniform_int_distribution<int> expo(0, 3), nterms(0, 4);
    auto rnd = [&] {
        PolyBuilder b(ctx);
        int n = nterms(rng);
        for (int t = 0; t < n; ++t) {
            Monomial m = Monomial::one(2);
            m.e[0] = static_cast<int16_t>(expo(rng));
            m.e[1] = static_cast<int16_t>(expo(rng));
            b.add(m, rat(num(rng), den(rng)));
        }
        return b.build();
    };
    for (int it = 0; it < 500 && ring_ok; ++it) {
        ParamPoly p = rnd(), q = rnd(), r = rnd();
        ring_ok = ring_ok && (p * q) * r == p * (q * r) && p * (q + r) == p * q + p * r &&
                  (p + q) + r == p + (q + r);
    }
    line(10, "polyalg ring axioms", ring_ok, "500 random triples");

    // Buchberger post-hoc criterion on 20 random small ideals
    std::uniform_int_distribution<int> nvars(1, 3), ngens(1, 3), gterms(1, 4);
    const std::vector<std::string> names = {"x", "y", "z"};
    int done = 0;
    bool gb_ok = true;
    while (done < 20) {
        int nv = nvars(rng);
        auto c3 = VarContext::make(std::vector<std::string>(names.begin(), names.begin() + nv));
        std::vector<ParamPoly> gens;
        for (int g = 0, ng = ngens(rng); g < ng; ++g) {
            PolyBuilder b(c3);
            for (int t = 0, nt = gterms(rng); t < nt; ++t) {
                Monomial m = Monomial::one(nv);
                for (int i = 0; i < nv; ++i) m.e[i] = static_cast<int16_t>(expo(rng));
                b.add(m, Rational(num(rng)));
            }
            ParamPoly p = b.build();
            if (!p.is_zero()) gens.push_back(p);
        }
        if (gens.empty()) continue;
        GroebnerBasis gb;
        try {
            gb = buchberger(gens);
        } catch (const ResourceLimit&) {
            continue;
        }
        ++done;
        for (const auto& g : gens) gb_ok = gb_ok && normal_form(g, gb).is_zero();
    }
    line(10, "buchberger post hoc", gb_ok, "20 random ideals, generators reduce to zero");

    // truncation insensitivity across the catalog at m=4
    const auto& cat = Catalog::instance();
    GenerateOptions opt;
    opt.cross_check = true;
    bool trunc_ok = true;
    int covered = 0;
    for (const auto& id : cat.ids()) {
        FamilyRecord rec = cat.record(id, 0);
        PlanarSystem bound = Catalog::instantiate_record(rec, rec.default_bindings);
        if (!bound.slots_polynomial()) continue;
        bool rational = true;
        for (const auto& p : bound.parameters())
            if (rec.constants.count(p)) rational = false;
        if (!rational) continue;
        try {
            generate_sys(bound, 4, opt);
        } catch (const TruncationSensitivity&) {
            trunc_ok = false;
        }
        ++covered;
    }
    line(10, "truncation insensitivity", trunc_ok && covered >= 20,
         std::to_string(covered) + " catalog systems at N vs N+2, m=4");
}

void criterion11() {
    // explicit non-reproduction: no competing normal-form implementation and
    // no literature CPU figures are asserted; the benchmark only demonstrates
    // finite, deterministic timings that grow with the order
    const auto& cat = Catalog::instance();
    FamilyRecord abel = cat.record("abel9", 0);
    PlanarSystem sys = PlanarSystem::from_components(abel.xdot, abel.ydot, abel.params);
    double prev = -1;
    bool finite = true;
    std::string digest_first, digest_second;
    for (int m : {1, 2, 3, 4}) {
        auto t0 = std::chrono::steady_clock::now();
        GenerateResult r = generate_sys(sys, m);
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        finite = finite && sec >= 0 && sec < 600;
        prev = sec;
        if (m == 4) {
            std::string all;
            for (const auto& c : r.conditions.polys) all += c.to_string() + ";";
            digest_first = fnv1a_digest(all);
            GenerateResult r2 = generate_sys(sys, m);
            all.clear();
            for (const auto& c : r2.conditions.polys) all += c.to_string() + ";";
            digest_second = fnv1a_digest(all);
        }
    }
    (void)prev;
    line(11, "bench finiteness", finite, "timings finite for m = 1..4 on the degree-9 family");
    line(11, "bench determinism", digest_first == digest_second,
         "identical condition digests across repeated runs");
    std::printf("criterion 11  note: the normal-form comparison and its CPU table are "
                "deliberately not reproduced; no quantitative timing is asserted\n");
}

} // namespace

int main(int argc, char** argv) {
    std::string which = argc > 1 ? argv[1] : "all";
    try {
        if (which == "1" || which == "all") criterion1();
        if (which == "2" || which == "all") criterion2();
        if (which == "3a" || which == "all") criterion3a();
        if (which == "3b") criterion3b();
        if (which == "4" || which == "all") criterion4();
        if (which == "5" || which == "all") criterion5();
        if (which == "6" || which == "all") criterion6();
        if (which == "7" || which == "all") criterion7();
        if (which == "8" || which == "all") criterion8();
        if (which == "9" || which == "all") criterion9();
        if (which == "10" || which == "all") criterion10();
        if (which == "11" || which == "all") criterion11();
    } catch (const std::exception& e) {
        std::printf("criterion %s  ABORT: %s\n", which.c_str(), e.what());
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
