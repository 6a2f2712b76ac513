#include "catenoid/geodesics.hpp"

#include "catenoid/elliptic.hpp"
#include "catenoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace catenoid {

namespace {

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

// cosh^2 x - L^2 for |L| = cosh(x_tp), free of cancellation near x = x_tp.
double cosh_gap(double x, double x_tp, double abs_lambda) {
    const double diff = 2.0 * std::sinh(0.5 * (x + x_tp)) * std::sinh(0.5 * (x - x_tp));
    return diff * (std::cosh(x) + abs_lambda);
}

// Antiderivative of Lambda / (a sqrt(cosh^2 - Lambda^2)), odd in v.
double subcritical_primitive(double lambda, double x) {
    const double sh = std::sinh(x);
    const double gap = std::cosh(x) * std::cosh(x) - lambda * lambda;
    const double arg = std::clamp(sh / std::sqrt(gap), -1.0, 1.0);
    return lambda * elliptic_f(std::asin(arg), lambda * lambda);
}

double supercritical_primitive(const Catenoid& geom, double lambda, double v_turn, double v) {
    const double a = geom.throat_radius();
    const double abs_lambda = std::abs(lambda);
    const double x = std::abs(v) / a;
    const double x_tp = v_turn / a;
    const double delta = std::max(std::abs(v) - v_turn, 0.0);
    double g = 0.0;
    if (delta < kTurningSeriesBand) {
        g = 2.0 * abs_lambda * std::sqrt(delta) / std::sqrt(a * std::sinh(2.0 * x_tp));
    } else {
        const double arg = std::min(std::sqrt(cosh_gap(x, x_tp, abs_lambda)) / std::sinh(x), 1.0);
        g = elliptic_f(std::asin(arg), 1.0 / (lambda * lambda));
    }
    return sign_of(lambda) * sign_of(v) * g;
}

}  // namespace

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Meridional: return "Meridional";
        case Regime::Subcritical: return "Subcritical";
        case Regime::Critical: return "Critical";
        case Regime::Supercritical: return "Supercritical";
    }
    return "Unknown";
}

Regime regime_of(double lambda) noexcept {
    const double m = std::abs(lambda);
    if (m <= kRegimeTolerance) return Regime::Meridional;
    if (std::abs(m - 1.0) <= kRegimeTolerance) return Regime::Critical;
    return m < 1.0 ? Regime::Subcritical : Regime::Supercritical;
}

double azimuthal_momentum(const Catenoid& geom, const GeodesicState& s) {
    const double a = geom.throat_radius();
    const double h = geom.metric_factor(s.v);
    return a * a * h * h * s.u_dot;
}

double geodesic_energy(const Catenoid& geom, const GeodesicState& s) {
    const double a = geom.throat_radius();
    const double h = geom.metric_factor(s.v);
    return 0.5 * h * h * (s.v_dot * s.v_dot + a * a * s.u_dot * s.u_dot);
}

GeodesicSpec classify(const Catenoid& geom, const GeodesicState& state) {
    const double a = geom.throat_radius();
    GeodesicSpec spec;
    spec.p_u = azimuthal_momentum(geom, state);
    spec.energy = geodesic_energy(geom, state);
    if (!(spec.energy > 0.0) || !std::isfinite(spec.energy)) {
        throw DegenerateVelocity("geodesic state has zero velocity");
    }
    spec.lambda = spec.p_u / (a * std::sqrt(2.0 * spec.energy));
    spec.regime = regime_of(spec.lambda);
    if (spec.regime == Regime::Supercritical) {
        spec.v_turn = a * std::acosh(std::abs(spec.lambda));
    }
    spec.sign = sign_of(state.v_dot);
    return spec;
}

GeodesicSpec spec_from_lambda(const Catenoid& geom, double lambda, int sign) {
    if (!std::isfinite(lambda)) {
        throw InvalidArgument("Lambda must be finite");
    }
    const double a = geom.throat_radius();
    GeodesicSpec spec;
    spec.energy = 0.5;
    spec.p_u = a * lambda;
    spec.lambda = lambda;
    spec.regime = regime_of(lambda);
    if (spec.regime == Regime::Supercritical) {
        spec.v_turn = a * std::acosh(std::abs(lambda));
    }
    spec.sign = sign < 0 ? -1 : 1;
    return spec;
}

double orbit_u_of_v(const GeodesicSpec& spec, const Catenoid& geom, double v, double u0) {
    if (!std::isfinite(v)) {
        throw InvalidArgument("orbit_u_of_v: v must be finite");
    }
    switch (spec.regime) {
        case Regime::Meridional:
        case Regime::Critical: {
            std::ostringstream os;
            os << "orbit_u_of_v: no u(v) closed form in the " << to_string(spec.regime) << " regime";
            throw WrongRegime(os.str());
        }
        case Regime::Subcritical:
            return u0 + spec.sign * subcritical_primitive(spec.lambda, v / geom.throat_radius());
        case Regime::Supercritical: {
            const double v_turn = spec.v_turn.value();
            if (std::abs(v) < v_turn - kTurningSeriesBand) {
                std::ostringstream os;
                os << "orbit_u_of_v: |v|=" << std::abs(v) << " inside the turning point " << v_turn;
                throw OutsideDomain(os.str());
            }
            return u0 + spec.sign * supercritical_primitive(geom, spec.lambda, v_turn, v);
        }
    }
    return u0;
}

double orbit_slope(const GeodesicSpec& spec, const Catenoid& geom, double v) {
    const double a = geom.throat_radius();
    const double x = v / a;
    double gap = 0.0;
    if (spec.regime == Regime::Supercritical) {
        gap = cosh_gap(std::abs(x), spec.v_turn.value() / a, std::abs(spec.lambda));
    } else {
        gap = std::cosh(x) * std::cosh(x) - spec.lambda * spec.lambda;
    }
    if (!(gap > 0.0)) {
        throw OutsideDomain("orbit_slope: v at or inside the turning point");
    }
    return spec.sign * spec.lambda / (a * std::sqrt(gap));
}

void geodesic_rhs(const Catenoid& geom, std::span<const double> y, std::span<double> dydt) {
    const double a = geom.throat_radius();
    const double t = std::tanh(y[1] / a);
    const double u_dot = y[2];
    const double v_dot = y[3];
    dydt[0] = u_dot;
    dydt[1] = v_dot;
    dydt[2] = -2.0 * (t / a) * u_dot * v_dot;
    dydt[3] = -(t / a) * v_dot * v_dot + a * t * u_dot * u_dot;
}

TrajectoryRecord integrate_geodesic(const Catenoid& geom, const GeodesicState& state0, double t_final,
                                    double tol) {
    IntegratorConfig config;
    config.rel_tol = tol;
    config.abs_tol = tol;
    return integrate_geodesic(geom, state0, t_final, config);
}

TrajectoryRecord integrate_geodesic(const Catenoid& geom, const GeodesicState& state0, double t_final,
                                    const IntegratorConfig& config) {
    if (!(t_final > 0.0)) {
        throw InvalidArgument("integrate_geodesic: t_final must be positive");
    }
    auto rhs = [&geom](double, std::span<const double> y, std::span<double> dydt) { geodesic_rhs(geom, y, dydt); };
    Diagnostics diag;
    diag.names = {"p_u", "E"};
    diag.evaluate = [&geom](double, std::span<const double> y) {
        const GeodesicState s{y[0], y[1], y[2], y[3]};
        return std::vector<double>{azimuthal_momentum(geom, s), geodesic_energy(geom, s)};
    };
    return integrate(rhs, {state0.u, state0.v, state0.u_dot, state0.v_dot}, 0.0, t_final, config, diag);
}

double lambda_from_dipole(const Catenoid& geom, const GeodesicState& mean_state) {
    return classify(geom, mean_state).lambda;
}

OrbitComparison orbit_deviation(const Catenoid& geom, const GeodesicSpec& spec, std::span<const OrbitSample> path,
                                double turn_exclusion) {
    OrbitComparison out;
    if (path.empty()) {
        return out;
    }
    const OrbitSample& first = path.front();
    if (spec.regime == Regime::Meridional || spec.regime == Regime::Critical) {
        for (const auto& p : path) {
            const double d = spec.regime == Regime::Meridional ? std::abs(p.u - first.u) : std::abs(p.v);
            out.max_deviation = std::max(out.max_deviation, d);
            ++out.compared;
        }
        return out;
    }

    // u = u_ref + sgn(v') G(v) on every monotone piece, where G is the
    // branch-free primitive. u_ref is fixed by the first sample clear of the
    // turning point: G grows like sqrt(v - v_turn) there, so a rounding-level
    // error in v_turn would otherwise offset every later comparison.
    GeodesicSpec unsigned_spec = spec;
    unsigned_spec.sign = 1;
    const double v_turn = spec.v_turn.value_or(0.0);
    auto near_turn = [&](const OrbitSample& p) {
        return spec.regime == Regime::Supercritical && std::abs(p.v) - v_turn < turn_exclusion;
    };
    const auto anchor = std::find_if(path.begin(), path.end(), [&](const OrbitSample& p) { return !near_turn(p); });
    if (anchor == path.end()) {
        out.excluded = path.size();
        return out;
    }
    const double u_ref = anchor->u - sign_of(anchor->v_dot) * orbit_u_of_v(unsigned_spec, geom, anchor->v, 0.0);
    for (const auto& p : path) {
        if (near_turn(p)) {
            ++out.excluded;
            continue;
        }
        const double predicted = u_ref + sign_of(p.v_dot) * orbit_u_of_v(unsigned_spec, geom, p.v, 0.0);
        out.max_deviation = std::max(out.max_deviation, std::abs(p.u - predicted));
        ++out.compared;
    }
    return out;
}

}  // namespace catenoid
