#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "isochron/catalog.hpp"
#include "isochron/groebner.hpp"
#include "isochron/parse.hpp"
#include "isochron/report.hpp"

using namespace isochron;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EngineError("UsageError", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::map<std::string, Rational> parse_bindings(const std::string& spec) {
    std::map<std::string, Rational> out;
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw EngineError("UsageError", "bindings look like name=value, got " + item);
        out[item.substr(0, eq)] = rat_from_string(item.substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_amplitudes(const std::string& spec) {
    std::vector<double> out;
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ',')) if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

PlanarSystem system_from_document(const std::string& text,
                                  std::map<std::string, Rational> bindings = {}) {
    SystemDocument doc = load_system_document(text);
    return Catalog::instantiate_record(doc.record, bindings);
}

int cmd_reduce(const std::string& path, int order) {
    std::string text = read_file(path);
    PlanarSystem s = system_from_document(text);
    LienardForm l = reduce_to_lienard(s);
    std::cout << "f = " << l.f.to_string() << "\n";
    std::cout << "g = " << l.g.to_string() << "\n";
    SeriesBundle b = build_series_bundle(l, order);
    std::cout << "F    = " << b.F.to_string(6) << "\n";
    std::cout << "phi  = " << b.phi.to_string(6) << "\n";
    std::cout << "X    = " << b.X.to_string(6) << "\n";
    std::cout << "g e^F= " << b.geF.to_string(6) << "\n";
    return kExitPass;
}

int cmd_conditions(const std::string& path, int m, bool json_out, bool cross_check,
                   long time_limit_ms) {
    std::string text = read_file(path);
    PlanarSystem s = system_from_document(text);
    GenerateOptions opt;
    opt.cross_check = cross_check;
    opt.time_limit_ms = time_limit_ms;
    auto t0 = std::chrono::steady_clock::now();
    GenerateResult r = generate_sys(s, m, opt);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (json_out) {
        nlohmann::json j;
        j["inputs_digest"] = fnv1a_digest(text);
        j["order"] = m;
        j["truncation"] = r.derivation.truncation;
        nlohmann::json conds = nlohmann::json::array();
        for (const auto& c : r.conditions.polys) conds.push_back(c.to_string());
        j["conditions"] = conds;
        nlohmann::json urabe;
        for (const auto& [k, v] : r.urabe.phi) urabe["c" + std::to_string(k)] = v.to_string();
        j["urabe"] = urabe;
        j["time_ms"] = ms;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "Sys(" << m << "): " << r.conditions.polys.size() << " conditions\n";
        for (size_t i = 0; i < r.conditions.polys.size(); ++i)
            std::cout << "  s" << i + 1 << " = " << r.conditions.polys[i].to_string() << "\n";
        for (const auto& [k, v] : r.urabe.phi)
            std::cout << "  c" << k << " = " << v.to_string() << "\n";
    }
    return kExitPass;
}

int cmd_verify(const std::string& target, const std::string& at, int m,
               const std::string& amplitudes, bool json_out) {
    std::map<std::string, Rational> bindings = parse_bindings(at);
    RunReport rep;
    rep.command = "verify " + target;

    if (Catalog::instance().has(target)) {
        rep.inputs_digest = fnv1a_digest(target + "|" + at);
        long n = 0;
        if (auto it = bindings.find("n"); it != bindings.end()) n = it->second.get_num().get_si();
        FamilyRecord rec = Catalog::instance().record(target, n);
        if (rec.is_template) {
            // parameter playground: check the bound point directly
            PlanarSystem bound = Catalog::instantiate_record(rec, bindings);
            int mm = m > 0 ? m : rec.default_m;
            CandidateReport cr = verify_candidate(bound, {}, mm);
            rep.add("candidate", cr.pass ? "pass" : "fail",
                    "Sys(" + std::to_string(mm) + ") residuals at the bound point");
            auto amps = amplitudes.empty() ? std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}
                                           : parse_amplitudes(amplitudes);
            ScanResult scan = isochronicity_scan(Catalog::instance().numeric_field(rec, bindings),
                                                 amps);
            std::ostringstream os;
            os.precision(3);
            os << std::scientific << scan.spread;
            rep.add("period-spread", scan.spread < 1e-6 ? "pass" : "fail", os.str());
        } else {
            BatteryReport br = m > 0
                                   ? Catalog::instance().verification_battery(target, bindings, m)
                                   : [&] {
                                         auto b = rec.default_bindings;
                                         for (auto& kv : bindings) b[kv.first] = kv.second;
                                         return Catalog::instance().verification_battery(
                                             target, b, rec.default_m);
                                     }();
            for (const auto& c : br.checks) rep.add(c.name, c.status, c.detail);
        }
    } else {
        std::string text = read_file(target);
        rep.inputs_digest = fnv1a_digest(text);
        SystemDocument doc = load_system_document(text);
        PlanarSystem bound = Catalog::instantiate_record(doc.record, bindings);
        int mm = m > 0 ? m : 6;
        std::map<std::string, Binding> leftover;
        for (const auto& [name, cid] : doc.record.constants)
            leftover.emplace(name, Binding(AlgebraicConstant::lookup(cid).evaluate()));
        CandidateReport cr = verify_candidate(bound, leftover, mm);
        rep.add("candidate", cr.pass ? "pass" : "fail",
                "Sys(" + std::to_string(mm) + ") residuals");
        if (!amplitudes.empty()) {
            auto amps = parse_amplitudes(amplitudes);
            CompiledField f = Catalog::instance().numeric_field(doc.record, bindings);
            ScanResult scan = isochronicity_scan(f, amps);
            std::ostringstream os;
            os.precision(3);
            os << std::scientific << scan.spread;
            rep.add("period-spread", scan.spread < 1e-6 ? "pass" : "fail", os.str());
        }
    }
    if (json_out) std::cout << rep.to_json().dump(2) << "\n";
    else std::cout << rep.to_text();
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_groebner(const std::string& path, const std::string& order_name, long pair_limit,
                 long degree_limit) {
    std::string text = read_file(path);
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> vars;
    std::vector<std::string> polys;
    while (std::getline(is, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (vars.empty() && line.rfind("vars", 0) == 0) {
            std::istringstream vs(line.substr(4));
            std::string v;
            while (vs >> v) vars.push_back(v);
        } else {
            polys.push_back(line);
        }
    }
    if (vars.empty()) throw EngineError("UsageError", "groebner input starts with 'vars ...'");
    VarContext ctx = VarContext::make(vars);
    std::vector<ParamPoly> gens;
    for (const auto& p : polys) gens.push_back(parse_poly_in(p, ctx));
    GroebnerLimits lim;
    lim.max_pairs = pair_limit;
    lim.max_degree = degree_limit;
    MonomialOrder order = order_name == "lex" ? MonomialOrder::Lex : MonomialOrder::DRL;
    GroebnerBasis gb = buchberger(gens, order, lim);
    for (const auto& g : gb.gens) std::cout << g.to_string() << "\n";
    return kExitPass;
}

int cmd_period(const std::string& target, const std::string& at, const std::string& amplitudes,
               const std::string& csv_path) {
    std::map<std::string, Rational> bindings = parse_bindings(at);
    std::vector<double> amps = amplitudes.empty()
                                   ? std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}
                                   : parse_amplitudes(amplitudes);
    CompiledField f = [&] {
        if (Catalog::instance().has(target)) {
            long n = 0;
            if (auto it = bindings.find("n"); it != bindings.end()) n = it->second.get_num().get_si();
            auto rec = Catalog::instance().record(target, n);
            auto b = rec.default_bindings;
            for (auto& kv : bindings) b[kv.first] = kv.second;
            return Catalog::instance().numeric_field(rec, b);
        }
        SystemDocument doc = load_system_document(read_file(target));
        return Catalog::instance().numeric_field(doc.record, bindings);
    }();
    ScanResult scan = isochronicity_scan(f, amps);
    std::cout << "amplitude   period\n";
    std::cout.precision(12);
    for (const auto& p : scan.periods)
        std::cout << "  " << std::fixed << p.amplitude << "   " << p.period << "\n";
    std::cout.precision(3);
    std::cout << "spread " << std::scientific << scan.spread << "\n";
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << scan_to_csv(scan);
    }
    return kExitPass;
}

int cmd_bench(const std::string& path, const std::string& orders_arg) {
    if (orders_arg.empty()) throw EngineError("UsageError", "--orders is required");
    std::string text = read_file(path);
    PlanarSystem s = system_from_document(text);
    std::istringstream is(orders_arg);
    std::string item;
    std::cout << "order   wall_s   conditions   digest\n";
    while (std::getline(is, item, ',')) {
        int m = std::stoi(item);
        auto t0 = std::chrono::steady_clock::now();
        GenerateResult r = generate_sys(s, m);
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string all;
        for (const auto& c : r.conditions.polys) all += c.to_string() + ";";
        for (const auto& [k, v] : r.urabe.phi) all += v.to_string() + ";";
        std::cout << "  " << m << "   " << std::fixed << sec << "   "
                  << r.conditions.polys.size() << "   " << fnv1a_digest(all) << "\n";
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic-numeric analysis of isochronous centers for planar systems "
                 "reducible to Lienard type equations"};
    app.require_subcommand(1);

    std::string file, target, at, amplitudes, csv, orders, gborder = "drl";
    int order_m = 0, reduce_order = 8;
    bool json_out = false, cross_check = false;
    long pair_limit = 5000, degree_limit = 40, time_limit = 0;

    auto* reduce = app.add_subcommand("reduce", "reduce a system document to Lienard form");
    reduce->add_option("file", file)->required();
    reduce->add_option("--order", reduce_order, "series order to display");

    auto* conditions = app.add_subcommand("conditions", "generate the necessary conditions Sys(m)");
    conditions->add_option("file", file)->required();
    conditions->add_option("--order", order_m, "number of matching steps m")->required();
    conditions->add_flag("--json", json_out);
    conditions->add_flag("--cross-check", cross_check, "recompute at N+2 and compare");
    conditions->add_option("--time-limit", time_limit, "wall-clock cap in milliseconds");

    auto* verify = app.add_subcommand("verify", "run the verification battery");
    verify->add_option("target", target, "family id or system document")->required();
    verify->add_option("--at", at, "parameter bindings name=value,...");
    verify->add_option("--order", order_m, "matching steps m");
    verify->add_option("--amplitudes", amplitudes, "comma-separated list");
    verify->add_flag("--json", json_out);

    auto* gb = app.add_subcommand("groebner", "reduced Groebner basis of an ideal");
    gb->add_option("file", file)->required();
    gb->add_option("--monomial-order", gborder, "drl|lex");
    gb->add_option("--pair-limit", pair_limit);
    gb->add_option("--degree-limit", degree_limit);

    auto* period = app.add_subcommand("period", "numerical period measurements");
    period->add_option("target", target, "family id or system document")->required();
    period->add_option("--at", at);
    period->add_option("--amplitudes", amplitudes);
    period->add_option("--csv", csv, "write amplitude,period rows to a file");

    auto* bench = app.add_subcommand("bench", "time condition generation at several orders");
    bench->add_option("file", file)->required();
    bench->add_option("--orders", orders, "comma-separated list of m values")->required();

    try {
        app.parse(argc, argv);
        if (reduce->parsed()) return cmd_reduce(file, reduce_order);
        if (conditions->parsed()) {
            if (order_m < 1) throw EngineError("UsageError", "--order must be at least 1");
            return cmd_conditions(file, order_m, json_out, cross_check, time_limit);
        }
        if (verify->parsed()) return cmd_verify(target, at, order_m, amplitudes, json_out);
        if (gb->parsed()) return cmd_groebner(file, gborder, pair_limit, degree_limit);
        if (period->parsed()) return cmd_period(target, at, amplitudes, csv);
        if (bench->parsed()) return cmd_bench(file, orders);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const EngineError& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
