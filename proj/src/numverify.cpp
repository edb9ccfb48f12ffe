#include "isochron/numverify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace isochron {

CompiledField CompiledField::from(const PlanarField& f) {
    const VarContext& ctx = f.context();
    int xi = ctx.index_of("x"), yi = ctx.index_of("y");
    if (xi < 0 || yi < 0) throw MalformedSystem("field must use variables x and y");
    auto compile = [&](const ParamPoly& p, std::vector<RawFieldTerm>& out) {
        for (const auto& t : p.terms()) {
            for (int i = 0; i < t.m.n; ++i)
                if (t.m.e[i] != 0 && i != xi && i != yi)
                    throw UnboundVariableInNumericMode(
                        "field still has the symbolic parameter " + ctx.name(i));
            out.push_back({rat_to_double(t.c), t.m.e[xi], t.m.e[yi]});
        }
    };
    CompiledField c;
    compile(f.xdot, c.fx_);
    compile(f.ydot, c.fy_);
    return c;
}

CompiledField CompiledField::from_terms(std::vector<RawFieldTerm> fx, std::vector<RawFieldTerm> fy) {
    CompiledField c;
    c.fx_ = std::move(fx);
    c.fy_ = std::move(fy);
    return c;
}

double CompiledField::eval(const std::vector<RawFieldTerm>& p, double x, double y) {
    double s = 0;
    for (const auto& m : p) {
        double v = m.c;
        for (int i = 0; i < m.ex; ++i) v *= x;
        for (int i = 0; i < m.ey; ++i) v *= y;
        s += v;
    }
    return s;
}

std::array<double, 2> CompiledField::operator()(double x, double y) const {
    return {eval(fx_, x, y), eval(fy_, x, y)};
}

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

using Vec2 = std::array<double, 2>;

inline Vec2 axpy(const Vec2& y0, double h, std::initializer_list<std::pair<double, const Vec2*>> ks) {
    Vec2 r = y0;
    for (const auto& [a, k] : ks) {
        r[0] += h * a * (*k)[0];
        r[1] += h * a * (*k)[1];
    }
    return r;
}

struct StepResult {
    Vec2 ynew;
    Vec2 k1, k7;   // FSAL pair; k1 = f(y0), k7 = f(ynew)
    double err;
};

StepResult dopri_step(const CompiledField& f, const Vec2& y0, double h, const Vec2* k1_in) {
    Vec2 k1 = k1_in ? *k1_in : f(y0[0], y0[1]);
    Vec2 y2 = axpy(y0, h, {{a21, &k1}});
    Vec2 k2 = f(y2[0], y2[1]);
    Vec2 y3 = axpy(y0, h, {{a31, &k1}, {a32, &k2}});
    Vec2 k3 = f(y3[0], y3[1]);
    Vec2 y4 = axpy(y0, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    Vec2 k4 = f(y4[0], y4[1]);
    Vec2 y5 = axpy(y0, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    Vec2 k5 = f(y5[0], y5[1]);
    Vec2 y6 = axpy(y0, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    Vec2 k6 = f(y6[0], y6[1]);
    Vec2 ynew = axpy(y0, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    Vec2 k7 = f(ynew[0], ynew[1]);
    Vec2 errv = {h * (e1 * k1[0] + e3 * k3[0] + e4 * k4[0] + e5 * k5[0] + e6 * k6[0] + e7 * k7[0]),
                 h * (e1 * k1[1] + e3 * k3[1] + e4 * k4[1] + e5 * k5[1] + e6 * k6[1] + e7 * k7[1])};
    double scale0 = std::max({std::abs(y0[0]), std::abs(ynew[0]), 1e-4});
    double scale1 = std::max({std::abs(y0[1]), std::abs(ynew[1]), 1e-4});
    double err = std::sqrt(0.5 * ((errv[0] / scale0) * (errv[0] / scale0) +
                                  (errv[1] / scale1) * (errv[1] / scale1)));
    return {ynew, k1, k7, err};
}

void validate_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw EngineError("UsageError", "integration tolerance must lie in [1e-13, 1e-6]");
}

// one controlled integration driver shared by the public entry points
template <class OnStep>
void drive(const CompiledField& f, Vec2 y, double t0, double tmax, double tol, double max_step,
           Orbit* orbit, OnStep&& on_step) {
    double t = t0;
    double h = std::min(1e-3, max_step);
    double errold = 1.0;
    Vec2 k1 = f(y[0], y[1]);
    long steps = 0, rejected = 0;
    if (orbit) {
        orbit->t.push_back(t);
        orbit->state.push_back(y);
    }
    while (t < tmax) {
        h = std::min(h, tmax - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) throw StepSizeUnderflow();
        StepResult st = dopri_step(f, y, h, &k1);
        double err = st.err / tol;
        if (err <= 1.0) {
            Vec2 yprev = y;
            double tprev = t;
            t += h;
            y = st.ynew;
            k1 = st.k7;   // FSAL
            ++steps;
            if (std::hypot(y[0], y[1]) > 1e6) throw BlowUp();
            if (orbit) {
                orbit->t.push_back(t);
                orbit->state.push_back(y);
            }
            if (!on_step(tprev, yprev, st.k1, t, y, st.k7)) {
                if (orbit) {
                    orbit->steps = steps;
                    orbit->rejected = rejected;
                }
                return;
            }
            // PI controller
            double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) *
                         std::pow(errold > 0 ? errold : 1e-10, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 5.0);
            h = std::min(h * fac, max_step);
            errold = err;
        } else {
            ++rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
    if (orbit) {
        orbit->steps = steps;
        orbit->rejected = rejected;
    }
}

} // namespace

Orbit integrate_orbit(const CompiledField& f, std::array<double, 2> x0, const IntegrateOptions& opt) {
    validate_tol(opt.tol);
    Orbit orbit;
    orbit.tol = opt.tol;
    drive(f, x0, 0.0, opt.tmax, opt.tol, opt.max_step, &orbit,
          [](double, const Vec2&, const Vec2&, double, const Vec2&, const Vec2&) { return true; });
    return orbit;
}

PeriodMeasurement measure_period(const CompiledField& f, double amplitude, double tol) {
    validate_tol(tol);
    if (!(amplitude > 0)) throw EngineError("UsageError", "amplitude must be positive");
    Vec2 start = {amplitude, 0.0};

    struct Crossing {
        double t0, t1;
        Vec2 y0, y1, d0, d1;
    };
    std::optional<Crossing> hit;
    double t_elapsed = 0;
    drive(f, start, 0.0, 200.0, tol, 0.2, nullptr,
          [&](double tp, const Vec2& yp, const Vec2& dp, double tn, const Vec2& yn, const Vec2& dn) {
              t_elapsed = tn;
              if (tp > 0 && yp[1] < 0.0 && yn[1] >= 0.0 && yp[0] > 0.0 && yn[0] > 0.0) {
                  hit = Crossing{tp, tn, yp, yn, dp, dn};
                  return false;
              }
              return true;
          });
    if (!hit) throw NoReturnDetected("no return to the section y=0, x>0 before t=200");

    // cubic Hermite for y(t) on the bracketing step, then bisection + Newton
    const Crossing& cr = *hit;
    double h = cr.t1 - cr.t0;
    auto hermite_y = [&](double s) {   // s in [0,1]
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        double h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s);
        double h11 = s * s * (s - 1);
        return h00 * cr.y0[1] + h10 * h * cr.d0[1] + h01 * cr.y1[1] + h11 * h * cr.d1[1];
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60 && hi - lo > 1e-16; ++i) {
        double mid = 0.5 * (lo + hi);
        (hermite_y(mid) < 0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);

    // polish with local re-integration (classical RK4 substeps from the step start)
    auto local_state = [&](double dt) {
        Vec2 y = cr.y0;
        int nsub = 16;
        double hh = dt / nsub;
        for (int i = 0; i < nsub; ++i) {
            Vec2 k1 = f(y[0], y[1]);
            Vec2 k2 = f(y[0] + 0.5 * hh * k1[0], y[1] + 0.5 * hh * k1[1]);
            Vec2 k3 = f(y[0] + 0.5 * hh * k2[0], y[1] + 0.5 * hh * k2[1]);
            Vec2 k4 = f(y[0] + hh * k3[0], y[1] + hh * k3[1]);
            y[0] += hh / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            y[1] += hh / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        }
        return y;
    };
    double dt = s * h;
    double resid = 0;
    for (int it = 0; it < 8; ++it) {
        Vec2 y = local_state(dt);
        resid = std::abs(y[1]);
        double dy = f(y[0], y[1])[1];
        if (resid < 1e-14 || dy == 0) break;
        dt -= y[1] / dy;
        dt = std::clamp(dt, 0.0, h);
    }
    PeriodMeasurement out;
    out.amplitude = amplitude;
    out.period = cr.t0 + dt;
    out.crossing_residual = resid;
    if (!(out.crossing_residual < tol * 100 + 1e-12))
        throw NoReturnDetected("section crossing could not be refined below tolerance");
    (void)t_elapsed;
    return out;
}

ScanResult isochronicity_scan(const CompiledField& f, const std::vector<double>& amplitudes,
                              double tol) {
    if (amplitudes.empty()) throw EngineError("UsageError", "amplitude list is empty");
    std::vector<std::future<PeriodMeasurement>> jobs;
    jobs.reserve(amplitudes.size());
    for (double a : amplitudes)
        jobs.push_back(std::async(std::launch::async, [&, a] { return measure_period(f, a, tol); }));
    ScanResult out;
    double lo = 0, hi = 0;
    for (size_t i = 0; i < jobs.size(); ++i) {
        PeriodMeasurement m = jobs[i].get();
        if (i == 0) lo = hi = m.period;
        lo = std::min(lo, m.period);
        hi = std::max(hi, m.period);
        out.periods.push_back(m);
    }
    out.spread = hi - lo;
    return out;
}

double integral_drift(const Orbit& orbit, const EvalExpr& H) {
    if (orbit.state.empty()) throw EngineError("UsageError", "empty orbit");
    auto h0 = H.eval(orbit.state[0][0], orbit.state[0][1]);
    if (!h0.ok) throw DomainErrorOnOrbit("H undefined at the orbit start: " + h0.error);
    double ref = std::max(std::abs(h0.value), 1e-12);
    double drift = 0;
    for (const auto& s : orbit.state) {
        auto h = H.eval(s[0], s[1]);
        if (!h.ok) throw DomainErrorOnOrbit("H undefined along the orbit: " + h.error);
        drift = std::max(drift, std::abs(h.value - h0.value) / ref);
    }
    return drift;
}

bool numeric_linearization_check(const CompiledField& f, const EvalExpr& u, const EvalExpr& v,
                                 std::array<double, 2> x0, const LinearizationCheckOptions& opt) {
    IntegrateOptions io;
    io.tol = 1e-10;
    io.tmax = opt.tmax;
    io.max_step = 0.02;
    Orbit orbit = integrate_orbit(f, x0, io);

    // five-point stencil around orbit samples; each offset state comes from a
    // short fixed-step RK4 arc so the stencil error stays ~delta^4
    const double delta = 5e-3;
    auto advance = [&](Vec2 y, double dt) {
        int nsub = 4;
        double hh = dt / nsub;
        for (int i = 0; i < nsub; ++i) {
            Vec2 k1 = f(y[0], y[1]);
            Vec2 k2 = f(y[0] + 0.5 * hh * k1[0], y[1] + 0.5 * hh * k1[1]);
            Vec2 k3 = f(y[0] + 0.5 * hh * k2[0], y[1] + 0.5 * hh * k2[1]);
            Vec2 k4 = f(y[0] + hh * k3[0], y[1] + hh * k3[1]);
            y[0] += hh / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            y[1] += hh / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        }
        return y;
    };

    int samples = 0;
    double radius0 = -1;
    double last_t = -1;
    for (size_t i = 0; i < orbit.state.size(); ++i) {
        const Vec2& s = orbit.state[i];
        if (orbit.t[i] - last_t < 0.05) continue;
        if (std::abs(s[1]) < opt.min_abs_y) continue;   // branch-aware skip
        last_t = orbit.t[i];
        Vec2 pts[5];
        pts[0] = advance(s, -2 * delta);
        pts[1] = advance(s, -delta);
        pts[2] = s;
        pts[3] = advance(s, delta);
        pts[4] = advance(s, 2 * delta);
        double uv[5][2];
        bool skip = false;
        for (int k = 0; k < 5 && !skip; ++k) {
            auto ru = u.eval(pts[k][0], pts[k][1]);
            auto rv = v.eval(pts[k][0], pts[k][1]);
            if (!ru.ok || !rv.ok) { skip = true; break; }
            uv[k][0] = ru.value;
            uv[k][1] = rv.value;
        }
        if (skip) continue;
        // skip stencils that straddle a branch cut of (u, v): a genuine jump
        // dwarfs the smooth variation, which is O(delta) per gap
        double scale = std::sqrt(uv[2][0] * uv[2][0] + uv[2][1] * uv[2][1]) + 1.0;
        double jump = 0;
        for (int k = 0; k < 4; ++k)
            jump = std::max({jump, std::abs(uv[k + 1][0] - uv[k][0]),
                             std::abs(uv[k + 1][1] - uv[k][1])});
        if (jump > 50 * delta * scale) continue;
        double du = (-uv[4][0] + 8 * uv[3][0] - 8 * uv[1][0] + uv[0][0]) / (12 * delta);
        double dv = (-uv[4][1] + 8 * uv[3][1] - 8 * uv[1][1] + uv[0][1]) / (12 * delta);
        if (std::abs(du + uv[2][1]) > opt.tol) return false;
        if (std::abs(dv - uv[2][0]) > opt.tol) return false;
        double r2 = uv[2][0] * uv[2][0] + uv[2][1] * uv[2][1];
        if (radius0 < 0) radius0 = r2;
        else if (std::abs(r2 - radius0) > opt.tol * std::max(1.0, radius0)) return false;
        ++samples;
    }
    if (samples < opt.min_samples)
        throw InsufficientSamples("only " + std::to_string(samples) + " usable samples");
    return true;
}

std::string scan_to_csv(const ScanResult& scan) {
    std::ostringstream os;
    os << "amplitude,period\n";
    os.precision(15);
    for (const auto& m : scan.periods) os << m.amplitude << "," << m.period << "\n";
    return os.str();
}

} // namespace isochron
