#ifndef ISOCHRON_CATALOG_HPP
#define ISOCHRON_CATALOG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochron/algebraic.hpp"
#include "isochron/calgorithm.hpp"
#include "isochron/evalexpr.hpp"
#include "isochron/numverify.hpp"

namespace isochron {

struct UrabeSpec {
    enum class Kind { Zero, ClosedForm, Unknown };
    Kind kind = Kind::Unknown;
    ParamPoly k1;   // over the family's parameter context
    Rational k2 = 1;
    ParamPoly k3;
    long s = 1;
};

// One family of the isochronous-center inventory (or a reusable template).
struct FamilyRecord {
    std::string id;
    std::vector<std::string> aliases;
    std::string note;
    bool is_template = false;       // parameter playground, no battery claims
    bool defective_source = false;  // printed source fails verification; kept verbatim
    bool has_degree_param = false;  // family indexed by an integer degree n

    std::vector<std::string> params;
    std::map<std::string, std::string> constants;   // parameter -> AlgebraicConstant id
    PolyFraction xdot, ydot;                        // over {x, y, params, constants}
    std::vector<ParamPoly> nonzero;                 // constraints on bindings

    UrabeSpec urabe;
    std::optional<PowerIntegral> pintegral;
    std::optional<LinearizationData> linearization;
    std::optional<PlanarField> commuting;
    std::optional<ParamPoly> inv_factor;
    std::optional<std::pair<EvalExpr, EvalExpr>> uv_linearization;

    std::map<std::string, Rational> default_bindings;
    int default_m = 6;
    std::vector<double> scan_amplitudes = {0.1, 0.2, 0.3, 0.4, 0.5};
};

struct CheckResult {
    std::string name;
    std::string status;   // "pass", "fail", "skip"
    std::string detail;
    bool passed() const { return status != "fail"; }
};

struct BatteryReport {
    std::string id;
    bool pass = true;
    std::vector<CheckResult> checks;
};

class Catalog {
public:
    static const Catalog& instance();

    std::vector<std::string> ids() const;
    bool has(const std::string& id) const;
    // n-indexed families take the degree through bindings["n"]
    FamilyRecord record(const std::string& id, long n = 0) const;

    PlanarSystem instantiate(const std::string& id,
                             const std::map<std::string, Rational>& bindings) const;

    BatteryReport verification_battery(const std::string& id,
                                       const std::map<std::string, Rational>& bindings,
                                       int m) const;
    BatteryReport verification_battery(const std::string& id) const;   // defaults

    // Numeric double-precision field at the given bindings (algebraic
    // constants resolved through their evaluators).
    CompiledField numeric_field(const FamilyRecord& rec,
                                const std::map<std::string, Rational>& bindings) const;

    static PlanarSystem instantiate_record(const FamilyRecord& rec,
                                           const std::map<std::string, Rational>& bindings);

private:
    Catalog();
    std::map<std::string, FamilyRecord> fixed_;
    std::map<std::string, std::string> alias_;
};

// System documents for the CLI: same line-based format as the fixture file
// restricted to one system (see docs/grammar.md).
struct SystemDocument {
    std::string name;
    FamilyRecord record;   // only system fields populated
};

SystemDocument load_system_document(const std::string& text);

} // namespace isochron

#endif
