#include "isochron/catalog.hpp"

#include <cmath>
#include <sstream>

#include "isochron/parse.hpp"

namespace isochron {

extern const char* kCatalogFixtures;   // generated from data/catalog.txt

namespace {

std::pair<std::string, std::string> split_key(const std::string& line) {
    size_t i = line.find_first_of(" \t");
    if (i == std::string::npos) return {line, ""};
    size_t j = line.find_first_not_of(" \t", i);
    return {line.substr(0, i), j == std::string::npos ? "" : line.substr(j)};
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

VarContext record_system_context(const FamilyRecord& r) {
    std::vector<std::string> names = {"x", "y"};
    for (const auto& p : r.params) names.push_back(p);
    for (const auto& [c, _] : r.constants) names.push_back(c);
    return VarContext::make(names);
}

VarContext record_param_context(const FamilyRecord& r) {
    std::vector<std::string> names = r.params;
    for (const auto& [c, _] : r.constants) names.push_back(c);
    return VarContext::make(names);
}

std::pair<long, long> parse_exponent_pair(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return {std::stol(s), 1};
    return {std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1))};
}

// all system parameters of the record: params + constants
std::vector<std::string> all_parameters(const FamilyRecord& r) {
    std::vector<std::string> out = r.params;
    for (const auto& [c, _] : r.constants) out.push_back(c);
    return out;
}

FamilyRecord parse_block(const std::vector<std::pair<std::string, std::string>>& lines) {
    FamilyRecord r;
    // first pass: identity, parameters, constants
    for (const auto& [key, val] : lines) {
        if (key == "family") r.id = val;
        else if (key == "alias") r.aliases.push_back(val);
        else if (key == "note") r.note = val;
        else if (key == "template") r.is_template = true;
        else if (key == "defective") r.defective_source = true;
        else if (key == "params") r.params = split_words(val);
        else if (key == "constant") {
            auto w = split_words(val);
            if (w.size() != 2) throw FixtureFormatError("constant needs <name> <id>: " + val);
            r.constants[w[0]] = w[1];
        }
    }
    if (r.id.empty()) throw FixtureFormatError("fixture block without a family id");
    VarContext sys_ctx = record_system_context(r);
    VarContext par_ctx = record_param_context(r);

    std::optional<ParamPoly> pint_num, pint_base;
    std::optional<std::pair<long, long>> pint_exp;
    std::optional<ParamPoly> com_x, com_y;

    for (const auto& [key, val] : lines) {
        if (key == "xdot") r.xdot = parse_ratfun_in(val, sys_ctx);
        else if (key == "ydot") r.ydot = parse_ratfun_in(val, sys_ctx);
        else if (key == "nonzero") r.nonzero.push_back(parse_ratfun_in(val, par_ctx).as_polynomial());
        else if (key == "urabe") {
            if (val == "zero") r.urabe.kind = UrabeSpec::Kind::Zero;
            else if (val == "unknown") r.urabe.kind = UrabeSpec::Kind::Unknown;
            else throw FixtureFormatError("urabe must be zero|unknown, got " + val);
        } else if (key == "urabe_k1") {
            r.urabe.kind = UrabeSpec::Kind::ClosedForm;
            r.urabe.k1 = parse_ratfun_in(val, par_ctx).as_polynomial();
        } else if (key == "urabe_k2") r.urabe.k2 = rat_from_string(val);
        else if (key == "urabe_k3") r.urabe.k3 = parse_ratfun_in(val, par_ctx).as_polynomial();
        else if (key == "urabe_s") r.urabe.s = std::stol(val);
        else if (key == "pintegral_num") pint_num = parse_ratfun_in(val, sys_ctx).as_polynomial();
        else if (key == "pintegral_base") pint_base = parse_ratfun_in(val, sys_ctx).as_polynomial();
        else if (key == "pintegral_exp") pint_exp = parse_exponent_pair(val);
        else if (key == "invfactor") r.inv_factor = parse_ratfun_in(val, sys_ctx).as_polynomial();
        else if (key == "commuting_xdot") com_x = parse_ratfun_in(val, sys_ctx).as_polynomial();
        else if (key == "commuting_ydot") com_y = parse_ratfun_in(val, sys_ctx).as_polynomial();
        else if (key == "ulin" || key == "vlin") {
            EvalExpr e = parse_extended(val);
            if (!r.uv_linearization) r.uv_linearization = std::make_pair(EvalExpr(), EvalExpr());
            (key == "ulin" ? r.uv_linearization->first : r.uv_linearization->second) = e;
        } else if (key == "default") {
            auto w = split_words(val);
            if (w.size() != 2) throw FixtureFormatError("default needs <name> <value>");
            r.default_bindings[w[0]] = rat_from_string(w[1]);
        } else if (key == "m") r.default_m = std::stoi(val);
        else if (key == "amplitudes") {
            r.scan_amplitudes.clear();
            for (const auto& w : split_words(val)) r.scan_amplitudes.push_back(std::stod(w));
        }
    }
    if (pint_num && pint_base && pint_exp)
        r.pintegral = PowerIntegral{*pint_num, *pint_base, pint_exp->first, pint_exp->second};
    if (com_x && com_y) r.commuting = PlanarField{*com_x, *com_y};
    for (const auto& p : r.params)
        if (!r.default_bindings.count(p)) r.default_bindings[p] = 1;
    return r;
}

std::map<std::string, FamilyRecord> parse_fixtures(const std::string& text) {
    std::map<std::string, FamilyRecord> out;
    std::istringstream is(text);
    std::string line;
    std::vector<std::pair<std::string, std::string>> block;
    bool in_block = false;
    while (std::getline(is, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        size_t b = line.find_last_not_of(" \t\r");
        line = b == std::string::npos ? "" : line.substr(0, b + 1);
        size_t a = line.find_first_not_of(" \t");
        line = a == std::string::npos ? "" : line.substr(a);
        if (line.empty()) continue;
        auto [key, val] = split_key(line);
        if (key == "family") {
            if (in_block) throw FixtureFormatError("missing 'end' before new family");
            in_block = true;
            block.clear();
        }
        if (!in_block) throw FixtureFormatError("content outside a family block: " + line);
        if (key == "end") {
            FamilyRecord r = parse_block(block);
            out.emplace(r.id, std::move(r));
            in_block = false;
        } else {
            block.emplace_back(key, val);
        }
    }
    if (in_block) throw FixtureFormatError("unterminated family block");
    return out;
}

// ------------------------------------------------------- degree-indexed families

FamilyRecord build_case17(long n) {
    FamilyRecord r;
    r.id = "thm1-case17";
    r.has_degree_param = true;
    r.params = {"a"};
    auto ctx = VarContext::make({"x", "y", "a"});
    ParamPoly x = ParamPoly::variable(ctx, "x"), y = ParamPoly::variable(ctx, "y"),
              a = ParamPoly::variable(ctx, "a"), one = ParamPoly::constant(ctx, 1);
    r.xdot = PolyFraction(-y + a * ParamPoly::variable(ctx, "x", n - 1) * y);
    r.ydot = PolyFraction(x + a * ParamPoly::variable(ctx, "x", n - 2) * y * y);
    r.urabe.kind = UrabeSpec::Kind::Zero;
    r.pintegral = PowerIntegral{x * x + y * y, -one + a * ParamPoly::variable(ctx, "x", n - 1),
                                2, n - 1};
    r.linearization =
        LinearizationData{x, y, one - a * ParamPoly::variable(ctx, "x", n - 1), -1, n - 1};
    r.default_bindings["a"] = 1;
    return r;
}

FamilyRecord build_case18(long n) {
    FamilyRecord r;
    r.id = "thm1-case18";
    r.has_degree_param = true;
    r.params = {"c"};
    auto ctx = VarContext::make({"x", "y", "c"});
    ParamPoly x = ParamPoly::variable(ctx, "x"), y = ParamPoly::variable(ctx, "y"),
              c = ParamPoly::variable(ctx, "c"), one = ParamPoly::constant(ctx, 1);
    ParamPoly xn1 = ParamPoly::variable(ctx, "x", n - 1);
    r.xdot = PolyFraction(-y - (c * xn1 * y).scaled(Rational(n, n - 1)));
    r.ydot = PolyFraction(x - (c * ParamPoly::variable(ctx, "x", n - 2) * y * y)
                                  .scaled(Rational(n * n, n - 1)) +
                          c * ParamPoly::variable(ctx, "x", n));
    r.urabe.kind = UrabeSpec::Kind::Zero;
    ParamPoly D = one.scaled(Rational(n - 1)) + (c * xn1).scaled(Rational(n));
    r.pintegral = PowerIntegral{x * x * (one + c * xn1).pow(2) + y * y, D, 2 * n, n - 1};
    r.linearization = LinearizationData{(x * (one + c * xn1)).scaled(Rational(1, n - 1)),
                                        y.scaled(Rational(1, n - 1)), D, -n, n - 1};
    r.default_bindings["c"] = 1;
    return r;
}

FamilyRecord build_case20(long n) {
    FamilyRecord r;
    r.id = "thm2-case20";
    r.has_degree_param = true;
    r.params = {"b"};
    auto ctx = VarContext::make({"x", "y", "b"});
    ParamPoly x = ParamPoly::variable(ctx, "x"), y = ParamPoly::variable(ctx, "y"),
              b = ParamPoly::variable(ctx, "b"), one = ParamPoly::constant(ctx, 1);
    ParamPoly xn1 = ParamPoly::variable(ctx, "x", n - 1);
    r.xdot = PolyFraction(-y + (b * xn1 * y).scaled(Rational(2)));
    r.ydot = PolyFraction(x + b * ParamPoly::variable(ctx, "x", n - 2) * y * y -
                          b * ParamPoly::variable(ctx, "x", n));
    auto par = VarContext::make({"b"});
    r.urabe.kind = UrabeSpec::Kind::ClosedForm;
    r.urabe.k1 = ParamPoly::variable(par, "b");
    r.urabe.k2 = 1;
    r.urabe.k3 = ParamPoly::variable(par, "b", 2);
    r.urabe.s = n - 1;
    r.pintegral = PowerIntegral{(x * x + y * y).pow(n - 1), (b * xn1).scaled(Rational(2)) - one,
                                1, 1};
    r.nonzero.push_back(ParamPoly::variable(par, "b"));
    r.default_bindings["b"] = 1;
    return r;
}

constexpr long kDefaultDegree = 4;

} // namespace

Catalog::Catalog() {
    fixed_ = parse_fixtures(kCatalogFixtures);
    for (const auto& [id, rec] : fixed_)
        for (const auto& a : rec.aliases) alias_[a] = id;
}

const Catalog& Catalog::instance() {
    static const Catalog c;
    return c;
}

std::vector<std::string> Catalog::ids() const {
    std::vector<std::string> out = {"thm1-case17", "thm1-case18", "thm2-case20"};
    for (const auto& [id, _] : fixed_) out.push_back(id);
    return out;
}

bool Catalog::has(const std::string& id) const {
    if (id == "thm1-case17" || id == "thm1-case18" || id == "thm2-case20") return true;
    return fixed_.count(id) > 0 || alias_.count(id) > 0;
}

FamilyRecord Catalog::record(const std::string& id, long n) const {
    if (n == 0) n = kDefaultDegree;
    if (n < 2) throw ConstraintViolation("degree n must be at least 2");
    if (id == "thm1-case17") return build_case17(n);
    if (id == "thm1-case18") return build_case18(n);
    if (id == "thm2-case20") return build_case20(n);
    auto it = fixed_.find(id);
    if (it == fixed_.end()) {
        auto al = alias_.find(id);
        if (al == alias_.end()) throw UnknownFamily("unknown family id: " + id);
        it = fixed_.find(al->second);
    }
    return it->second;
}

PlanarSystem Catalog::instantiate_record(const FamilyRecord& rec,
                                         const std::map<std::string, Rational>& bindings) {
    // constraints first
    for (const auto& nz : rec.nonzero) {
        std::map<std::string, Binding> b;
        bool all_bound = true;
        for (const auto& v : nz.context().names()) {
            auto it = bindings.find(v);
            if (it != bindings.end()) b.emplace(v, Binding(it->second));
            else if (nz.degree_in(v) > 0) all_bound = false;
        }
        if (!all_bound) continue;
        Rational value;
        if (nz.substitute_exact(b).is_rational_constant(value) && rat_is_zero(value))
            throw ConstraintViolation("binding violates the nonzero constraint " + nz.to_string());
    }
    PlanarSystem full = PlanarSystem::from_components(rec.xdot, rec.ydot, all_parameters(rec));
    std::map<std::string, Rational> usable;
    for (const auto& [k, v] : bindings)
        if (k != "n") usable.emplace(k, v);
    return full.bind(usable);
}

PlanarSystem Catalog::instantiate(const std::string& id,
                                  const std::map<std::string, Rational>& bindings) const {
    long n = 0;
    if (auto it = bindings.find("n"); it != bindings.end()) {
        if (it->second.get_den() != 1) throw ConstraintViolation("n must be an integer");
        n = it->second.get_num().get_si();
    }
    return instantiate_record(record(id, n), bindings);
}

CompiledField Catalog::numeric_field(const FamilyRecord& rec,
                                     const std::map<std::string, Rational>& bindings) const {
    std::map<std::string, Binding> values;
    for (const auto& [k, v] : bindings)
        if (k != "n") values.emplace(k, Binding(v));
    for (const auto& [name, cid] : rec.constants)
        values.emplace(name, Binding(AlgebraicConstant::lookup(cid).evaluate()));
    auto compile = [&](const PolyFraction& fr) {
        std::vector<RawFieldTerm> terms;
        BigFloat den = fr.den.evaluate_bigfloat(values);
        if (den.is_zero()) throw ConstraintViolation("denominator vanishes at the bindings");
        const VarContext& ctx = fr.num.context();
        int xi = ctx.index_of("x"), yi = ctx.index_of("y");
        // group by (ex, ey), evaluating the parameter part
        std::map<std::pair<int, int>, BigFloat> acc;
        for (const auto& t : fr.num.terms()) {
            BigFloat v(t.c);
            for (int i = 0; i < t.m.n; ++i) {
                if (t.m.e[i] == 0 || i == xi || i == yi) continue;
                auto it = values.find(ctx.name(i));
                if (it == values.end())
                    throw UnboundParameter("parameter not bound: " + ctx.name(i));
                const BigFloat* bf = std::get_if<BigFloat>(&it->second);
                BigFloat base = bf ? *bf : BigFloat(std::get<Rational>(it->second));
                v *= base.pow_si(t.m.e[i]);
            }
            auto key = std::make_pair(xi >= 0 ? t.m.e[xi] : 0, yi >= 0 ? t.m.e[yi] : 0);
            auto [it2, fresh] = acc.emplace(key, v);
            if (!fresh) it2->second += v;
        }
        for (const auto& [key, v] : acc)
            terms.push_back({(v / den).to_double(), key.first, key.second});
        return terms;
    };
    return CompiledField::from_terms(compile(rec.xdot), compile(rec.ydot));
}

namespace {

std::string residual_string(const BigFloat& v) {
    double d = v.to_double();
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << d;
    return os.str();
}

} // namespace

BatteryReport Catalog::verification_battery(const std::string& id) const {
    FamilyRecord rec = record(id, 0);
    return verification_battery(id, rec.default_bindings, rec.default_m);
}

BatteryReport Catalog::verification_battery(const std::string& id,
                                            const std::map<std::string, Rational>& bindings_in,
                                            int m) const {
    long n = 0;
    if (auto it = bindings_in.find("n"); it != bindings_in.end())
        n = it->second.get_num().get_si();
    FamilyRecord rec = record(id, n);
    std::map<std::string, Rational> bindings = rec.default_bindings;
    for (const auto& [k, v] : bindings_in) bindings[k] = v;

    BatteryReport rep;
    rep.id = rec.id;
    auto add = [&](std::string name, std::string status, std::string detail = "") {
        rep.pass = rep.pass && status != "fail";
        rep.checks.push_back({std::move(name), std::move(status), std::move(detail)});
    };

    std::map<std::string, Binding> numeric_bindings;
    for (const auto& [k, v] : bindings)
        if (k != "n") numeric_bindings.emplace(k, Binding(v));
    for (const auto& [name, cid] : rec.constants)
        numeric_bindings[name] = Binding(AlgebraicConstant::lookup(cid).evaluate());

    PlanarSystem symbolic = PlanarSystem::from_components(rec.xdot, rec.ydot, all_parameters(rec));
    PlanarSystem bound = instantiate_record(rec, bindings);

    // 1. zero-Urabe identity
    if (rec.urabe.kind == UrabeSpec::Kind::Zero) {
        auto conds = zero_urabe_conditions(symbolic);
        if (conds.empty()) {
            add("zero-urabe", "pass", "identity holds for all parameter values");
        } else if (!rec.constants.empty() || rec.defective_source) {
            BigFloat worst;
            for (const auto& c : conds) {
                BigFloat v = c.evaluate_bigfloat(numeric_bindings).abs();
                if (worst < v) worst = v;
            }
            bool ok = worst.below_pow10(40);
            add("zero-urabe", ok ? "pass" : "fail",
                "max residual " + residual_string(worst) + (ok ? " < 1e-40" : " (not < 1e-40)"));
        } else {
            add("zero-urabe", "fail", "nonzero residual conditions with rational coefficients");
        }
    }

    // 2. closed-form Urabe function
    if (rec.urabe.kind == UrabeSpec::Kind::ClosedForm) {
        std::map<std::string, Binding> pb;
        for (const auto& [k, v] : bindings)
            if (k != "n") pb.emplace(k, Binding(v));
        ParamPoly k1 = rec.urabe.k1.substitute_exact(pb);
        ParamPoly k3 = rec.urabe.k3.substitute_exact(pb);
        auto h = UrabeClosedForm::make(k1, rec.urabe.k2, k3, rec.urabe.s);
        int order = std::max<int>(40, 2 * static_cast<int>(rec.urabe.s) + 4);
        bool ok = urabe_series_check(reduce_to_lienard(bound), h, order);
        add("urabe-series", ok ? "pass" : "fail", "closed form to order " + std::to_string(order));
    }

    // 3. the eliminated coefficients and conditions at the bound point
    if (bound.slots_polynomial() && !rec.is_template) {
        try {
            std::map<std::string, Binding> leftover;
            for (const auto& p : bound.parameters()) {
                auto it = numeric_bindings.find(p);
                if (it != numeric_bindings.end()) leftover.emplace(p, it->second);
            }
            CandidateReport cr = verify_candidate(bound, leftover, m);
            add("candidate", cr.pass ? "pass" : "fail",
                "Sys(" + std::to_string(m) + ") residuals at the bound point");
        } catch (const EngineError& e) {
            add("candidate", "skip", e.what());
        }
    } else if (!rec.is_template) {
        add("candidate", "skip", "coefficients are not polynomial over the remaining parameters");
    }

    // 4. attached exact artifacts (checked with the record's own parameters)
    if (rec.pintegral || rec.linearization || rec.commuting || rec.inv_factor) {
        PlanarSystem for_field = symbolic.slots_polynomial() ? symbolic : bound;
        PlanarField field = for_field.field();
        const VarContext& fc = field.context();
        if (rec.pintegral) {
            PowerIntegral H{rec.pintegral->num.project_to(fc), rec.pintegral->base.project_to(fc),
                            rec.pintegral->p, rec.pintegral->q};
            add("power-integral", check_power_integral(H, field) ? "pass" : "fail");
        }
        if (rec.linearization) {
            LinearizationData L{rec.linearization->M.project_to(fc),
                                rec.linearization->N.project_to(fc),
                                rec.linearization->D.project_to(fc), rec.linearization->p,
                                rec.linearization->q};
            add("linearization", check_linearization(L, field) ? "pass" : "fail");
        }
        if (rec.commuting) {
            PlanarField Y{rec.commuting->xdot.project_to(fc), rec.commuting->ydot.project_to(fc)};
            PlanarField br = lie_bracket(field, Y);
            add("commuting-field", br.xdot.is_zero() && br.ydot.is_zero() ? "pass" : "fail",
                "bracket equals the stored oracle result (zero)");
        }
        if (rec.inv_factor) {
            add("inverse-integrating-factor",
                check_inverse_integrating_factor(rec.inv_factor->project_to(fc), field) ? "pass"
                                                                                        : "fail");
        }
    }

    // 5. numerical verdicts
    if (!rec.is_template && !rec.defective_source) {
      try {
        CompiledField nf = numeric_field(rec, bindings);
        ScanResult scan = isochronicity_scan(nf, rec.scan_amplitudes);
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << scan.spread;
        add("period-spread", scan.spread < 1e-6 ? "pass" : "fail",
            "spread " + os.str() + " over " + std::to_string(rec.scan_amplitudes.size()) +
                " amplitudes up to " +
                std::to_string(rec.scan_amplitudes.back()));
        if (rec.pintegral) {
            Orbit orbit = integrate_orbit(nf, {0.3, 0.0});
            // numeric drift of num/base^{p/q} along the orbit
            auto evalH = [&](double x, double y) {
                std::map<std::string, Binding> at = numeric_bindings;
                at["x"] = Binding(BigFloat(x));
                at["y"] = Binding(BigFloat(y));
                double numv = rec.pintegral->num.evaluate_bigfloat(at).to_double();
                double basev = rec.pintegral->base.evaluate_bigfloat(at).to_double();
                return numv / std::pow(basev, static_cast<double>(rec.pintegral->p) /
                                                  static_cast<double>(rec.pintegral->q));
            };
            double h0 = evalH(orbit.state[0][0], orbit.state[0][1]);
            double drift = 0;
            for (size_t i = 0; i < orbit.state.size(); i += 4)
                drift = std::max(drift,
                                 std::abs(evalH(orbit.state[i][0], orbit.state[i][1]) - h0) /
                                     std::max(std::abs(h0), 1e-12));
            std::ostringstream ds;
            ds.precision(3);
            ds << std::scientific << drift;
            add("integral-drift", drift < 1e-8 ? "pass" : "fail", "drift " + ds.str());
        }
        if (rec.uv_linearization) {
            bool ok = numeric_linearization_check(nf, rec.uv_linearization->first,
                                                  rec.uv_linearization->second, {0.3, 0.0});
            add("numeric-linearization", ok ? "pass" : "fail");
        }
      } catch (const EngineError& e) {
        add("numeric", "fail", std::string(e.code()) + ": " + e.what());
      }
    }
    return rep;
}

SystemDocument load_system_document(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> block;
    std::istringstream is(text);
    std::string line, name;
    while (std::getline(is, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        size_t b = line.find_last_not_of(" \t\r");
        line = b == std::string::npos ? "" : line.substr(0, b + 1);
        size_t a = line.find_first_not_of(" \t");
        line = a == std::string::npos ? "" : line.substr(a);
        if (line.empty()) continue;
        auto [key, val] = split_key(line);
        if (key == "system") { name = val; continue; }
        if (key == "end") continue;
        block.emplace_back(key, val);
    }
    if (name.empty()) throw FixtureFormatError("system documents start with 'system <name>'");
    block.insert(block.begin(), {"family", name});
    SystemDocument doc;
    doc.name = name;
    doc.record = parse_block(block);
    doc.record.is_template = true;
    return doc;
}

} // namespace isochron
