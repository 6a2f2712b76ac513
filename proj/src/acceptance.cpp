#include "catenoid/acceptance.hpp"

#include "catenoid/dipole_model.hpp"
#include "catenoid/elliptic.hpp"
#include "catenoid/errors.hpp"
#include "catenoid/geodesics.hpp"
#include "catenoid/scenarios.hpp"
#include "catenoid/vortex_system.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace catenoid {

namespace {

// Pinned tolerances.
constexpr double kGeodesicDrift = 1e-7;
constexpr double kMeridionalDrift = 1e-8;
constexpr double kGeodesicRuntime = 0.25;  // seconds, per scenario
constexpr double kVortexDrift = 1e-7;
constexpr double kVortexRuntime = 10.0;
constexpr double kLambdaBand = 1e-9;
constexpr double kOrbitAgreement = 1e-8;
constexpr double kEllipticAgreement = 1e-11;
constexpr double kConsistencyResidual = 1e-7;
constexpr double kConsistencyStep = 1e-6;
constexpr double kInvariantDrift = 1e-7;
constexpr double kConvergenceLow = 3.0;
constexpr double kConvergenceHigh = 5.0;
constexpr double kTruncationLow = 3.5;
constexpr double kTruncationHigh = 4.5;
constexpr double kDecomposition = 1e-12;
constexpr double kJRate = 1e-13;
constexpr std::uint64_t kSeed = 20240611;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

class Gate {
public:
    Gate(int id, std::string title) { r_.id = id; r_.title = std::move(title); }

    void at_most(const std::string& name, double value, double limit) {
        check(name + "=" + num(value) + " (<= " + num(limit) + ")", std::isfinite(value) && value <= limit);
    }
    void at_least(const std::string& name, double value, double limit) {
        check(name + "=" + num(value) + " (>= " + num(limit) + ")", std::isfinite(value) && value >= limit);
    }
    void within(const std::string& name, double value, double lo, double hi) {
        check(name + "=" + num(value) + " (in [" + num(lo) + ", " + num(hi) + "])",
              std::isfinite(value) && value >= lo && value <= hi);
    }
    void equals(const std::string& name, const std::string& value, const std::string& expected) {
        check(name + "=" + value + " (== " + expected + ")", value == expected);
    }
    void truth(const std::string& what, bool ok) { check(what, ok); }
    void note(const std::string& what) { r_.notes.push_back(what); }

    CriterionResult done() {
        r_.passed = ok_ && !r_.measurements.empty();
        return r_;
    }

private:
    void check(std::string text, bool ok) {
        if (!ok) text += " FAIL";
        r_.measurements.push_back(std::move(text));
        ok_ = ok_ && ok;
    }

    CriterionResult r_;
    bool ok_{true};
};

template <typename F>
CriterionResult guarded(int id, const std::string& title, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        CriterionResult r;
        r.id = id;
        r.title = title;
        r.measurements.push_back(std::string("exception: ") + e.what());
        return r;
    }
}

double max_drift_or_nan(const ScenarioResult& r, const std::string& name) {
    const auto it = r.drift.max_drift.find(name);
    return it == r.drift.max_drift.end() ? std::nan("") : it->second;
}

// Random vortex sets whose pairs are not nearly coincident.
std::vector<Vortex> random_vortices(std::mt19937_64& rng, double a) {
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_real_distribution<double> uu(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> vv(-1.5 * a, 1.5 * a);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::bernoulli_distribution sign(0.5);
    const Catenoid geom(a);
    for (;;) {
        std::vector<Vortex> w(static_cast<std::size_t>(count(rng)));
        for (auto& x : w) x = {uu(rng), vv(rng), (sign(rng) ? 1.0 : -1.0) * mag(rng)};
        bool separated = true;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j)
                separated = separated && geom.pair_kernel({w[i].u, w[i].v}, {w[j].u, w[j].v}) > 0.05;
        if (separated) return w;
    }
}

CriterionResult criterion_1() {
    Gate g(1, "Conservation, geodesic scenarios");
    for (const auto& c : {geodesic_meridional(), geodesic_neck(), geodesic_trapped()}) {
        const ScenarioResult r = run_scenario(c);
        const double limit = c.name == "geodesic-meridional" ? kMeridionalDrift : kGeodesicDrift;
        g.truth(c.name + " completed", r.record.completed());
        g.at_most(c.name + " dH", max_drift_or_nan(r, "H"), limit);
        g.at_most(c.name + " dJ", max_drift_or_nan(r, "J"), limit);
        g.at_most(c.name + " runtime_s", r.drift.runtime_seconds, kGeodesicRuntime);
    }
    return g.done();
}

CriterionResult criterion_2() {
    Gate g(2, "Conservation, scattering and co-rotating scenarios");
    for (const auto& c : {direct_scattering(), exchange_scattering(), corotating_direct(), corotating_exchange()}) {
        const ScenarioResult r = run_scenario(c);
        g.truth(c.name + " completed", r.record.completed());
        g.at_most(c.name + " dH", max_drift_or_nan(r, "H"), kVortexDrift);
        g.at_most(c.name + " dJ", max_drift_or_nan(r, "J"), kVortexDrift);
        g.at_most(c.name + " runtime_s", r.drift.runtime_seconds, kVortexRuntime);
        if (r.corotation) g.note(c.name + " centroid u-drift rate " + num(r.corotation->centroid_drift_rate));
    }
    return g.done();
}

CriterionResult criterion_3() {
    Gate g(3, "Scattering classification");
    const ScenarioResult direct = run_scenario(direct_scattering());
    const ScenarioResult exchange = run_scenario(exchange_scattering());
    g.equals("eps=0.07,delta=0.03", to_string(direct.scattering->classification), "Direct");
    g.equals("eps=delta=0.05", to_string(exchange.scattering->classification), "Exchange");
    g.note("partner distance ratios " + num(direct.scattering->partner_ratio) + ", " +
           num(exchange.scattering->partner_ratio));
    return g.done();
}

double initial_lambda(const ScenarioConfig& c) {
    const Catenoid geom(c.a);
    std::vector<double> y;
    for (const auto& w : c.vortices) {
        y.push_back(w.u);
        y.push_back(w.v);
    }
    return lambda_from_dipole(geom, dipole_center_state(c, y));
}

CriterionResult criterion_4() {
    Gate g(4, "Geodesic regime reproduction");
    const double l1 = initial_lambda(geodesic_meridional());
    g.at_most("meridional |Lambda|", std::abs(l1), kLambdaBand);

    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double eps : {0.05, 0.025, 0.0125}) {
        const double gap = std::abs(std::abs(initial_lambda(geodesic_neck(eps))) - 1.0);
        if (eps == 0.05) g.at_most("neck ||Lambda|-1| (eps=0.05)", gap, kLambdaBand);
        monotone = monotone && gap <= previous;
        previous = gap;
    }
    g.truth("neck ||Lambda|-1| non-increasing as eps halves", monotone);

    const ScenarioConfig trapped = geodesic_trapped();
    const double l3 = initial_lambda(trapped);
    g.at_least("trapped Lambda - 1", l3 - 1.0, 1.0 + kLambdaBand - 1.0);
    g.note("trapped Lambda " + num(l3) + " vs cosh(0.15) " + num(std::cosh(0.15)));
    const ScenarioResult r = run_scenario(trapped);
    const double eps = 0.05;
    g.at_least("trapped min(v - v_turn) + eps^2", r.comparison->min_v_above_turn + eps * eps, 0.0);
    return g.done();
}

GeodesicState on_orbit(const Catenoid& geom, double lambda, double v, int direction) {
    const double a = geom.throat_radius();
    const double h = geom.metric_factor(v);
    const double u_dot = lambda / (a * h * h);  // unit 2E
    const double v_dot = direction * std::sqrt(std::max(0.0, 1.0 - lambda * lambda / (h * h))) / h;
    return {0.3, v, u_dot, v_dot};
}

CriterionResult criterion_5() {
    Gate g(5, "Orbit-form agreement");
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> ua(0.5, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    double worst_sub = 0.0;
    double worst_super = 0.0;
    std::size_t compared = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Catenoid geom(ua(rng));
        const double a = geom.throat_radius();
        const bool super = trial % 2 == 1;
        const double sgn = coin(rng) ? 1.0 : -1.0;
        double lambda = 0.0;
        GeodesicState s0;
        if (super) {
            lambda = sgn * (1.05 + 0.95 * unit(rng));
            const double v_turn = a * std::acosh(std::abs(lambda));
            const double side = coin(rng) ? 1.0 : -1.0;
            const double v0 = side * (v_turn + a * (0.05 + 0.5 * unit(rng)));
            s0 = on_orbit(geom, lambda, v0, side > 0 ? -1 : 1);  // heading for the turning point
        } else {
            lambda = sgn * (0.05 + 0.9 * unit(rng));
            s0 = on_orbit(geom, lambda, a * (2.0 * unit(rng) - 1.0), coin(rng) ? 1 : -1);
        }
        IntegratorConfig cfg;
        cfg.sample_interval = 0.005;
        const TrajectoryRecord rec = integrate_geodesic(geom, s0, 3.0 * a, cfg);
        std::vector<OrbitSample> path;
        for (const auto& y : rec.states) path.push_back({y[0], y[1], y[3]});
        const GeodesicSpec spec = classify(geom, s0);
        const OrbitComparison cmp = orbit_deviation(geom, spec, path, 1e-4 * a);
        compared += cmp.compared;
        (super ? worst_super : worst_sub) = std::max(super ? worst_super : worst_sub, cmp.max_deviation);
    }
    g.at_most("subcritical max|u_analytic - u_ode|", worst_sub, kOrbitAgreement);
    g.at_most("supercritical max|u_analytic - u_ode|", worst_super, kOrbitAgreement);
    g.note(std::to_string(compared) + " orbit samples compared over 20 random specs");

    double worst_f = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double m = 0.99 * unit(rng);
        const double phi = (2.0 * unit(rng) - 1.0) * 0.5 * std::numbers::pi;
        worst_f = std::max(worst_f, std::abs(elliptic_f(phi, m) - elliptic_f_oracle(phi, m)));
    }
    g.at_most("max|elliptic_f - quadrature|", worst_f, kEllipticAgreement);
    return g.done();
}

CriterionResult criterion_6() {
    Gate g(6, "Hamiltonian-structure check");
    std::mt19937_64 rng(kSeed + 6);
    std::uniform_real_distribution<double> ua(0.5, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Catenoid geom(ua(rng));
        const auto w = random_vortices(rng, geom.throat_radius());
        worst = std::max(worst, hamiltonian_consistency_check(geom, w, kConsistencyStep));
    }
    g.at_most("max residual over 100 random states", worst, kConsistencyResidual);
    return g.done();
}

// Max distance between the finite-dipole center and the mean of the
// corresponding two point vortices, sampled on a common grid.
double center_deviation(double ell, double t_final) {
    const Catenoid geom(1.0);
    const DipoleState d{0.0, 0.15, 0.5 * std::numbers::pi, ell, 1.0};
    const DipoleSystem dip(geom, {d}, PropulsionMode::Full);
    const PlacedPair p = place_vortices(geom, d);
    const VortexSystem pair(geom, {{p.plus.u, p.plus.v, p.gamma_plus}, {p.minus.u, p.minus.v, p.gamma_minus}});
    const IntegratorConfig cfg;
    const TrajectoryRecord a = dip.integrate(t_final, cfg);
    const TrajectoryRecord b = pair.integrate(t_final, cfg);
    if (!a.completed() || !b.completed() || a.size() != b.size()) {
        throw Error("dipole convergence runs did not complete on a common grid");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double du = a.states[k][0] - 0.5 * (b.states[k][0] + b.states[k][2]);
        const double dv = a.states[k][1] - 0.5 * (b.states[k][1] + b.states[k][3]);
        worst = std::max(worst, std::hypot(du, dv));
    }
    return worst;
}

// Center L and E drift when only the leading self-propulsion is kept and the
// orientation turns by parallel transport alone.
std::pair<double, double> leading_order_invariant_drift(double ell, double t_final) {
    const Catenoid geom(1.0);
    const DipoleState d0{0.0, 0.15, 0.5 * std::numbers::pi, ell, 1.0};
    auto rhs = [&](double, std::span<const double> y, std::span<double> dydt) {
        const DipoleState d{y[0], y[1], y[2], ell, 1.0};
        const CenterVelocity c = self_propulsion_truncated(geom, d);
        dydt[0] = c.u_dot;
        dydt[1] = c.v_dot;
        dydt[2] = geom.transport_rotation_rate(d.v, c.u_dot);
    };
    Diagnostics diag;
    diag.names = {"L", "E"};
    diag.evaluate = [&](double, std::span<const double> y) {
        const DipoleState d{y[0], y[1], y[2], ell, 1.0};
        const CenterVelocity c = self_propulsion_truncated(geom, d);
        const GeodesicState s{d.u, d.v, c.u_dot, c.v_dot};
        return std::vector<double>{azimuthal_momentum(geom, s), geodesic_energy(geom, s)};
    };
    const TrajectoryRecord r = integrate(rhs, {d0.u, d0.v, d0.alpha}, 0.0, t_final, IntegratorConfig{}, diag);
    return {r.max_drift("L"), r.max_drift("E")};
}

CriterionResult criterion_7() {
    Gate g(7, "Finite-dipole convergence");
    const ScenarioConfig fig8 = finite_dipole_supercritical();
    const ScenarioResult r = run_scenario(fig8);
    g.truth("Full-mode run completed", r.record.completed());
    g.at_most("center L drift", max_drift_or_nan(r, "L"), kInvariantDrift);
    g.at_most("center E drift", max_drift_or_nan(r, "E"), kInvariantDrift);
    const double coarse = center_deviation(0.1, fig8.t_final);
    const double fine = center_deviation(0.05, fig8.t_final);
    g.within("center-vs-pair deviation ratio (ell 0.1 -> 0.05)", coarse / fine, kConvergenceLow, kConvergenceHigh);
    g.note("center-vs-pair deviation " + num(coarse) + " -> " + num(fine));
    if (r.comparison) {
        g.note("orbit-form deviation from the matched geodesic " + num(r.comparison->orbit.max_deviation));
    }
    const auto [dl, de] = leading_order_invariant_drift(0.1, fig8.t_final);
    g.note("leading-order propulsion with transport-only turning: L drift " + num(dl) + ", E drift " + num(de));
    return g.done();
}

double frame_speed(const Catenoid& geom, double v, double u_dot, double v_dot) {
    const double h = geom.metric_factor(v);
    return h * std::hypot(geom.throat_radius() * u_dot, v_dot);
}

CriterionResult criterion_8() {
    Gate g(8, "Truncation consistency");
    const Catenoid geom(1.0);
    const DipoleState probes[] = {
        {0.0, 0.5, 0.7, 0.0, 1.0}, {0.3, -0.8, 2.1, 0.0, 1.0}, {0.0, 0.15, 0.5 * std::numbers::pi, 0.0, 1.0},
        {1.0, 1.2, -0.4, 0.0, 1.0}};
    double worst_low = std::numeric_limits<double>::infinity();
    double worst_high = 0.0;
    for (DipoleState d : probes) {
        auto rel = [&](double ell) {
            d.ell = ell;
            const CenterVelocity f = self_propulsion_full(geom, d);
            const CenterVelocity t = self_propulsion_truncated(geom, d);
            return frame_speed(geom, d.v, f.u_dot - t.u_dot, f.v_dot - t.v_dot) /
                   frame_speed(geom, d.v, t.u_dot, t.v_dot);
        };
        const double ratio = rel(0.02) / rel(0.01);
        worst_low = std::min(worst_low, ratio);
        worst_high = std::max(worst_high, ratio);
    }
    g.within("min full-vs-truncated ratio (ell 0.02 -> 0.01)", worst_low, kTruncationLow, kTruncationHigh);
    g.within("max full-vs-truncated ratio (ell 0.02 -> 0.01)", worst_high, kTruncationLow, kTruncationHigh);

    std::mt19937_64 rng(kSeed + 8);
    std::uniform_real_distribution<double> uv(-1.5, 1.5);
    std::uniform_real_distribution<double> ualpha(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> uell(0.01, 0.3);
    double worst_velocity = 0.0;
    double worst_rotation = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const DipoleState d{uv(rng), uv(rng), ualpha(rng), uell(rng), 1.0};
        const PlacedPair p = place_vortices(geom, d);
        const std::vector<Vortex> pair{{p.plus.u, p.plus.v, p.gamma_plus}, {p.minus.u, p.minus.v, p.gamma_minus}};
        const auto vel = rhs(geom, pair);
        const CenterVelocity f = self_propulsion_full(geom, d);
        worst_velocity = std::max({worst_velocity, std::abs(f.u_dot - 0.5 * (vel[0].u_dot + vel[1].u_dot)),
                                   std::abs(f.v_dot - 0.5 * (vel[0].v_dot + vel[1].v_dot))});
        worst_rotation = std::max(worst_rotation,
                                  std::abs(self_rotation_closed_form(geom, d) - self_rotation_projected(geom, d)));
    }
    g.at_most("max|full - averaged pair rhs|", worst_velocity, kDecomposition);
    g.at_most("max|closed-form - projected self rotation|", worst_rotation, kDecomposition);
    return g.done();
}

CriterionResult criterion_9() {
    Gate g(9, "Analytic J-invariance");
    std::mt19937_64 rng(kSeed + 9);
    std::uniform_real_distribution<double> ua(0.5, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Catenoid geom(ua(rng));
        worst = std::max(worst, std::abs(momentum_map_rate(geom, random_vortices(rng, geom.throat_radius()))));
    }
    g.at_most("max|sum G_i a h_i^2 v_i'|", worst, kJRate);
    return g.done();
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    return {
        guarded(1, "Conservation, geodesic scenarios", criterion_1),
        guarded(2, "Conservation, scattering and co-rotating scenarios", criterion_2),
        guarded(3, "Scattering classification", criterion_3),
        guarded(4, "Geodesic regime reproduction", criterion_4),
        guarded(5, "Orbit-form agreement", criterion_5),
        guarded(6, "Hamiltonian-structure check", criterion_6),
        guarded(7, "Finite-dipole convergence", criterion_7),
        guarded(8, "Truncation consistency", criterion_8),
        guarded(9, "Analytic J-invariance", criterion_9),
    };
}

std::string format_acceptance(const std::vector<CriterionResult>& results, bool with_notes) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.title << ":";
        for (std::size_t i = 0; i < r.measurements.size(); ++i) os << (i ? "; " : " ") << r.measurements[i];
        os << "\n";
        if (with_notes) {
            for (const auto& n : r.notes) os << "       note: " << n << "\n";
        }
    }
    return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

}  // namespace catenoid
