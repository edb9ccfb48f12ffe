#ifndef ISOCHRON_NUMVERIFY_HPP
#define ISOCHRON_NUMVERIFY_HPP

#include <array>
#include <vector>

#include "isochron/evalexpr.hpp"
#include "isochron/lienard.hpp"

namespace isochron {

// Parameter-free planar field flattened to doubles for the integrator.
struct RawFieldTerm {
    double c;
    int ex, ey;
};

class CompiledField {
public:
    static CompiledField from(const PlanarField& f);
    static CompiledField from_terms(std::vector<RawFieldTerm> fx, std::vector<RawFieldTerm> fy);
    std::array<double, 2> operator()(double x, double y) const;

private:
    static double eval(const std::vector<RawFieldTerm>& p, double x, double y);
    std::vector<RawFieldTerm> fx_, fy_;
};

struct Orbit {
    std::vector<double> t;
    std::vector<std::array<double, 2>> state;
    long steps = 0;
    long rejected = 0;
    double tol = 0;
};

struct IntegrateOptions {
    double tol = 1e-10;
    double tmax = 60.0;
    double max_step = 0.2;
};

// Adaptive embedded Dormand-Prince 5(4) with PI step control.
Orbit integrate_orbit(const CompiledField& f, std::array<double, 2> x0,
                      const IntegrateOptions& opt = {});

struct PeriodMeasurement {
    double amplitude = 0;
    double period = 0;
    double crossing_residual = 0;
};

// Period through the section {y = 0, x > 0}, starting from (amplitude, 0).
PeriodMeasurement measure_period(const CompiledField& f, double amplitude, double tol = 1e-10);

struct ScanResult {
    std::vector<PeriodMeasurement> periods;
    double spread = 0;
};

ScanResult isochronicity_scan(const CompiledField& f, const std::vector<double>& amplitudes,
                              double tol = 1e-10);

// max over orbit samples of |H(state) - H(start)| / max(|H(start)|, eps)
double integral_drift(const Orbit& orbit, const EvalExpr& H);

struct LinearizationCheckOptions {
    double tol = 1e-6;
    double tmax = 7.0;
    double min_abs_y = 0.05;   // skip samples too close to the y=0 branch locus
    int min_samples = 20;
};

// Finite-difference check that t -> (u, v) along the orbit satisfies
// u' = -v, v' = u, and that u^2 + v^2 stays constant.
bool numeric_linearization_check(const CompiledField& f, const EvalExpr& u, const EvalExpr& v,
                                 std::array<double, 2> x0,
                                 const LinearizationCheckOptions& opt = {});

// CSV rows "amplitude,period" for offline plotting.
std::string scan_to_csv(const ScanResult& scan);

} // namespace isochron

#endif
