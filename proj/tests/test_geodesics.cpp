#include "catenoid/elliptic.hpp"
#include "catenoid/errors.hpp"
#include "catenoid/geodesics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace catenoid;
using doctest::Approx;

namespace {

// u(v) - u(v_lo) by quadrature of du/dv = L/(a sqrt(cosh^2 - L^2)). For a
// supercritical orbit starting at the turning point the substitution
// v = v_lo + s^2 removes the inverse square root singularity.
double orbit_by_quadrature(double lambda, double a, double v_lo, double v_hi, bool from_turn) {
    using boost::math::quadrature::gauss_kronrod;
    if (from_turn) {
        auto f = [&](double s) {
            if (s == 0.0) {
                return 2.0 * lambda / (a * std::sqrt(std::sinh(2.0 * v_lo / a) / a));
            }
            // cosh^2 v - cosh^2 v_lo without cancellation.
            const double gap = std::sinh((2.0 * v_lo + s * s) / a) * std::sinh(s * s / a);
            return 2.0 * s * lambda / (a * std::sqrt(gap));
        };
        return gauss_kronrod<double, 61>::integrate(f, 0.0, std::sqrt(v_hi - v_lo), 15, 1e-14);
    }
    auto f = [&](double v) {
        const double c = std::cosh(v / a);
        return lambda / (a * std::sqrt(c * c - lambda * lambda));
    };
    return gauss_kronrod<double, 61>::integrate(f, v_lo, v_hi, 15, 1e-14);
}

}  // namespace

TEST_CASE("regime boundaries") {
    CHECK(regime_of(0.0) == Regime::Meridional);
    CHECK(regime_of(5e-10) == Regime::Meridional);
    CHECK(regime_of(0.5) == Regime::Subcritical);
    CHECK(regime_of(-0.5) == Regime::Subcritical);
    CHECK(regime_of(1.0) == Regime::Critical);
    CHECK(regime_of(-1.0 - 5e-10) == Regime::Critical);
    CHECK(regime_of(1.0 + 1e-8) == Regime::Supercritical);
    CHECK(regime_of(-3.0) == Regime::Supercritical);
}

TEST_CASE("classify examples") {
    const Catenoid g(1.0);
    const auto mer = classify(g, {0.0, 0.4, 0.0, 1.3});
    CHECK(mer.lambda == 0.0);
    CHECK(mer.regime == Regime::Meridional);
    CHECK_FALSE(mer.v_turn.has_value());

    const auto neck = classify(g, {0.0, 0.0, -2.0, 0.0});
    CHECK(neck.lambda == Approx(-1.0).epsilon(1e-15));
    CHECK(neck.regime == Regime::Critical);

    const auto sup = classify(g, {0.0, 0.15, 1.0, 0.0});
    CHECK(sup.lambda == Approx(std::cosh(0.15)).epsilon(1e-15));
    CHECK(sup.lambda == Approx(1.0112711).epsilon(1e-7));
    CHECK(sup.regime == Regime::Supercritical);
    REQUIRE(sup.v_turn.has_value());
    CHECK(*sup.v_turn == Approx(0.15).epsilon(1e-10));
    CHECK(std::abs(std::cosh(*sup.v_turn) - std::abs(sup.lambda)) <= 1e-10);

    CHECK_THROWS_AS(classify(g, {0.0, 0.3, 0.0, 0.0}), DegenerateVelocity);
}

TEST_CASE("classification is invariant under time rescaling") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(-2.0, 2.0), vel(-3.0, 3.0), scale(0.01, 100.0);
    const Catenoid g(1.7);
    for (int k = 0; k < 200; ++k) {
        const GeodesicState s{pos(rng), pos(rng), vel(rng), vel(rng)};
        const double c = scale(rng);
        const auto a = classify(g, s);
        const auto b = classify(g, {s.u, s.v, c * s.u_dot, c * s.v_dot});
        CHECK(b.lambda == Approx(a.lambda).epsilon(1e-13));
        CHECK(b.regime == a.regime);
    }
}

TEST_CASE("orbit examples") {
    const Catenoid g(1.0);
    const auto sub = spec_from_lambda(g, 0.5);
    CHECK(orbit_u_of_v(sub, g, 0.0, 0.0) == 0.0);

    const double c1 = std::cosh(1.0);
    const double expected = 0.5 * elliptic_f(std::asin(std::sinh(1.0) / std::sqrt(c1 * c1 - 0.25)), 0.25);
    CHECK(orbit_u_of_v(sub, g, 1.0, 0.0) == Approx(expected).epsilon(1e-13));
    CHECK(orbit_u_of_v(sub, g, 1.0, 0.0) == Approx(orbit_by_quadrature(0.5, 1.0, 0.0, 1.0, false)).epsilon(1e-12));
    CHECK(orbit_u_of_v(sub, g, 1.0, 0.3) == Approx(expected + 0.3).epsilon(1e-13));

    const auto sup = spec_from_lambda(g, std::cosh(0.15));
    const double c3 = std::cosh(0.3), c15 = std::cosh(0.15);
    const double expected_sup = elliptic_f(std::asin(std::sqrt(c3 * c3 - c15 * c15) / std::sinh(0.3)), 1.0 / (c15 * c15));
    CHECK(orbit_u_of_v(sup, g, 0.3, 0.0) == Approx(expected_sup).epsilon(1e-12));
    CHECK(orbit_u_of_v(sup, g, 0.3, 0.0) ==
          Approx(orbit_by_quadrature(c15, 1.0, 0.15, 0.3, true)).epsilon(1e-11));
    CHECK(orbit_u_of_v(sup, g, *sup.v_turn, 0.0) == 0.0);

    CHECK_THROWS_AS(orbit_u_of_v(sup, g, 0.1, 0.0), OutsideDomain);
    CHECK_THROWS_AS(orbit_u_of_v(spec_from_lambda(g, 0.0), g, 0.5, 0.0), WrongRegime);
    CHECK_THROWS_AS(orbit_u_of_v(spec_from_lambda(g, 1.0), g, 0.5, 0.0), WrongRegime);
}

TEST_CASE("orbit slope matches finite differences") {
    for (double a : {0.7, 1.0, 2.0}) {
        const Catenoid g(a);
        for (double lambda : {-0.9, -0.3, 0.2, 0.8, 1.05, -1.4, 2.5}) {
            for (int sign : {-1, 1}) {
                const auto spec = spec_from_lambda(g, lambda, sign);
                const double lo = spec.v_turn ? *spec.v_turn + 1e-2 : -2.0 * a;
                for (double v = lo; v <= 2.5 * a; v += 0.173 * a) {
                    const double h = 1e-5;
                    const double fd =
                        (orbit_u_of_v(spec, g, v + h, 0.0) - orbit_u_of_v(spec, g, v - h, 0.0)) / (2 * h);
                    const double c = std::cosh(v / a);
                    const double exact = sign * lambda / (a * std::sqrt(c * c - lambda * lambda));
                    CHECK(orbit_slope(spec, g, v) == Approx(exact).epsilon(1e-13));
                    CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
                }
            }
        }
    }
}

TEST_CASE("supercritical orbit is continuous at the turning point") {
    const Catenoid g(1.3);
    const auto spec = spec_from_lambda(g, 1.2);
    const double vt = *spec.v_turn;
    // Series band and closed form meet without a jump.
    const double inside = orbit_u_of_v(spec, g, vt + 0.999e-8, 0.0);
    const double outside = orbit_u_of_v(spec, g, vt + 1.001e-8, 0.0);
    CHECK(inside > 0.0);
    CHECK(outside > inside);
    CHECK(outside - inside < 1e-6);
    // Odd in v.
    CHECK(orbit_u_of_v(spec, g, -(vt + 0.4), 0.0) == Approx(-orbit_u_of_v(spec, g, vt + 0.4, 0.0)).epsilon(1e-14));
}

TEST_CASE("invariants are conserved by integration") {
    const Catenoid g(1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(-1.5, 1.5), vel(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const GeodesicState s{pos(rng), pos(rng), vel(rng), vel(rng)};
        const auto rec = integrate_geodesic(g, s, 5.0, 1e-12);
        REQUIRE(rec.completed());
        const double p0 = std::abs(rec.diagnostics.front()[rec.diagnostic_index("p_u")]);
        const double e0 = rec.diagnostics.front()[rec.diagnostic_index("E")];
        if (p0 > 0.0) CHECK(rec.max_drift("p_u") / p0 <= 1e-9);
        CHECK(rec.max_drift("E") / e0 <= 1e-9);
        CHECK(rec.max_drift("E") <= 10.0 * 1e-12 * std::max(1.0, e0));
    }
}

TEST_CASE("meridional geodesic keeps u fixed") {
    const Catenoid g(1.0);
    const auto rec = integrate_geodesic(g, {0.7, -1.0, 0.0, 0.8}, 5.0, 1e-12);
    REQUIRE(rec.completed());
    for (const auto& y : rec.states) CHECK(std::abs(y[0] - 0.7) <= 1e-12);
}

TEST_CASE("neck circle stays at v = 0 with linear u") {
    const Catenoid g(2.0);
    const double omega = 0.6;
    const auto rec = integrate_geodesic(g, {0.0, 0.0, omega, 0.0}, 10.0, 1e-12);
    REQUIRE(rec.completed());
    for (std::size_t k = 0; k < rec.size(); ++k) {
        CHECK(std::abs(rec.states[k][1]) <= 1e-13);
        CHECK(rec.states[k][0] == Approx(omega * rec.times[k]).epsilon(1e-11));
    }
}

TEST_CASE("supercritical geodesic never crosses its turning point") {
    const Catenoid g(1.0);
    const auto rec = integrate_geodesic(g, {0.0, 0.15, 1.0, 0.0}, 8.0, 1e-12);
    REQUIRE(rec.completed());
    for (const auto& y : rec.states) CHECK(y[1] >= 0.15 - 1e-12);
}

TEST_CASE("closed form agrees with the integrated orbit") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> sub(0.05, 0.95), sup(1.02, 2.5), radius(0.5, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Catenoid g(radius(rng));
        const double a = g.throat_radius();
        const bool is_sup = (k % 2) == 1;
        const double lambda = is_sup ? sup(rng) : sub(rng);
        GeodesicState s0;
        if (is_sup) {
            // Start at the turning point, unit 2E.
            const double vt = a * std::acosh(lambda);
            s0 = {0.0, vt, 1.0 / (a * std::cosh(vt / a)), 0.0};
        } else {
            // Start on the neck heading up, unit 2E: a u' = L, v' = sqrt(1 - L^2).
            s0 = {0.0, 0.0, lambda / a, std::sqrt(1.0 - lambda * lambda)};
        }
        const auto spec = classify(g, s0);
        IntegratorConfig cfg;
        cfg.rel_tol = cfg.abs_tol = 1e-13;
        cfg.sample_interval = 0.01;
        const auto rec = integrate_geodesic(g, s0, 2.0 * a, cfg);
        REQUIRE(rec.completed());
        for (const auto& y : rec.states) {
            if (is_sup && y[1] - *spec.v_turn < 1e-4) continue;
            worst = std::max(worst, std::abs(y[0] - orbit_u_of_v(spec, g, y[1], 0.0)));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("lambda from a dipole's mean motion") {
    const Catenoid g(1.0);
    CHECK(lambda_from_dipole(g, {0.0, 0.4, 0.0, -0.7}) == 0.0);
    CHECK(lambda_from_dipole(g, {0.0, 0.0, 0.3, 0.0}) == Approx(1.0));
    CHECK(lambda_from_dipole(g, {0.0, 0.15, 0.3, 0.0}) == Approx(std::cosh(0.15)));
    CHECK(lambda_from_dipole(g, {0.0, 0.15, -0.3, 0.0}) == Approx(-std::cosh(0.15)));
    CHECK_THROWS_AS(lambda_from_dipole(g, {0.0, 0.15, 0.0, 0.0}), DegenerateVelocity);
}

TEST_CASE("orbit deviation of an exact geodesic is at rounding level") {
    const Catenoid g(1.0);
    const GeodesicState s0{0.2, 0.15, 1.0, 0.0};
    const auto spec = classify(g, s0);
    const auto rec = integrate_geodesic(g, s0, 6.0, 1e-13);
    std::vector<OrbitSample> path;
    for (const auto& y : rec.states) path.push_back({y[0], y[1], y[3]});
    const auto cmp = orbit_deviation(g, spec, path, 1e-4);
    CHECK(cmp.compared > 100);
    CHECK(cmp.max_deviation <= 1e-8);
}
