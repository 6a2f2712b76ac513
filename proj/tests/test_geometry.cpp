#include "catenoid/errors.hpp"
#include "catenoid/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace catenoid;
using doctest::Approx;

namespace {

// Independent series for the hyperbolic functions, so the expected values do
// not come from the same libm calls the library uses.
double cosh_series(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= x * x / ((2.0 * k - 1) * (2.0 * k));
        sum += term;
    }
    return sum;
}

double sinh_series(double x) {
    double term = x, sum = x;
    for (int k = 1; k < 40; ++k) {
        term *= x * x / ((2.0 * k) * (2.0 * k + 1));
        sum += term;
    }
    return sum;
}

double tanh_series(double x) { return sinh_series(x) / cosh_series(x); }

}  // namespace

TEST_CASE("construction rejects bad throat radii") {
    CHECK_THROWS_AS(Catenoid{0.0}, InvalidArgument);
    CHECK_THROWS_AS(Catenoid{-1.0}, InvalidArgument);
    CHECK_THROWS_AS(Catenoid{std::nan("")}, InvalidArgument);
    CHECK_THROWS_AS(Catenoid{INFINITY}, InvalidArgument);
    CHECK(Catenoid(2.5).throat_radius() == 2.5);
}

TEST_CASE("metric factor") {
    const Catenoid one(1.0), two(2.0);
    CHECK(one.metric_factor(0.0) == 1.0);
    CHECK(one.metric_factor(1.0) == Approx(cosh_series(1.0)).epsilon(1e-14));
    CHECK(one.metric_factor(1.0) == Approx(1.5430806348).epsilon(1e-10));
    CHECK(two.metric_factor(2.0) == Approx(1.5430806348).epsilon(1e-10));
    CHECK(two.area_weight(1.0) == Approx(2.0 * std::pow(cosh_series(0.5), 2)).epsilon(1e-14));
}

TEST_CASE("pair kernel examples") {
    const Catenoid g(1.0);
    CHECK(g.pair_kernel({0.3, 0.2}, {0.3, 0.2}) == 0.0);
    CHECK(g.pair_kernel({0.0, 0.0}, {std::numbers::pi, 0.0}) == Approx(2.0).epsilon(1e-15));
    CHECK(g.pair_kernel({0.0, 1.0}, {0.0, 0.0}) == Approx(cosh_series(1.0) - 1.0).epsilon(1e-13));
    CHECK(g.pair_kernel({0.0, 1.0}, {0.0, 0.0}) == Approx(0.5430806348).epsilon(1e-10));
}

TEST_CASE("pair kernel is symmetric and 2pi periodic") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0), v(-2.0, 2.0);
    const Catenoid g(1.3);
    for (int k = 0; k < 500; ++k) {
        const SurfacePoint p{u(rng), v(rng)}, q{u(rng), v(rng)};
        const double f = g.pair_kernel(p, q);
        CHECK(f >= 0.0);
        CHECK(g.pair_kernel(q, p) == f);
        const double shifted = g.pair_kernel({p.u + 2.0 * std::numbers::pi, p.v}, q);
        CHECK(std::abs(shifted - f) <= 1e-14 * std::max(1.0, f));
    }
}

TEST_CASE("green's function") {
    const Catenoid g(1.0);
    CHECK(g.greens_function({0.0, 0.0}, {std::numbers::pi, 0.0}) == Approx(std::log(2.0) / (4 * std::numbers::pi)));
    CHECK(g.greens_function({0.0, 0.0}, {std::numbers::pi, 0.0}) == Approx(0.0551589).epsilon(1e-6));
    CHECK(g.greens_function({0.0, 0.05}, {0.0, -0.05}) == Approx(-0.4216).epsilon(1e-4));
    const SurfacePoint p{0.4, -0.3}, q{1.1, 0.8};
    CHECK(g.greens_function(p, q) - g.greens_function(q, p) == 0.0);
    CHECK_THROWS_AS(g.greens_function(p, p), CoincidentVortices);
}

TEST_CASE("momentum potential") {
    const Catenoid g(1.0);
    CHECK(g.momentum_potential(0.0) == 0.0);
    // S(v) = int_0^v cosh^2 = v/2 + sinh(2v)/4 by the series of sinh.
    CHECK(g.momentum_potential(0.05) == Approx(0.025 + sinh_series(0.1) / 4.0).epsilon(1e-14));
    CHECK(g.momentum_potential(0.05) == Approx(0.0500417).epsilon(1e-6));

    for (double a : {0.5, 1.0, 2.0}) {
        const Catenoid c(a);
        for (double v = -3.0; v <= 3.0; v += 0.25) {
            const double s = c.momentum_potential(v);
            CHECK(std::abs(s + c.momentum_potential(-v)) <= 1e-14 * std::max(1.0, std::abs(s)));
            const double h = 1e-5;
            const double fd = (c.momentum_potential(v + h) - c.momentum_potential(v - h)) / (2 * h);
            const double exact = a * std::pow(std::cosh(v / a), 2);
            CHECK(std::abs(fd - exact) <= 1e-7 * exact);
        }
    }
}

TEST_CASE("christoffel symbols") {
    const Catenoid g(1.0);
    const auto c0 = g.christoffel(0.0);
    CHECK(c0.v_vv == 0.0);
    CHECK(c0.v_uu == 0.0);
    CHECK(c0.u_uv == 0.0);
    const auto c1 = g.christoffel(1.0);
    CHECK(c1.v_vv == Approx(tanh_series(1.0)).epsilon(1e-14));
    CHECK(c1.v_uu == Approx(-0.7615942).epsilon(1e-7));
    CHECK(c1.u_uv == Approx(0.7615942).epsilon(1e-7));
    const Catenoid g3(3.0);
    const auto c = g3.christoffel(0.7);
    CHECK(c.v_uu == Approx(-9.0 * c.v_vv).epsilon(1e-15));
}

TEST_CASE("transport rotation rate") {
    const Catenoid g(1.0);
    CHECK(g.transport_rotation_rate(0.0, 3.0) == 0.0);
    CHECK(g.transport_rotation_rate(0.5, 2.0) == Approx(2.0 * tanh_series(0.5)).epsilon(1e-14));
    CHECK(g.transport_rotation_rate(0.5, 2.0) == Approx(0.9242343).epsilon(1e-7));
    double prev = 0.0;
    for (double v = 0.5; v < 20.0; v += 0.5) {
        const double r = std::abs(g.transport_rotation_rate(v, -1.5));
        CHECK(r >= prev);
        CHECK(r <= 1.5);
        prev = r;
    }
}

TEST_CASE("embedding") {
    const Catenoid one(1.0), two(2.0);
    const auto e0 = one.embed({0.0, 0.0});
    CHECK(e0.x == 1.0);
    CHECK(e0.y == 0.0);
    CHECK(e0.z == 0.0);
    const auto e1 = one.embed({std::numbers::pi / 2, 0.0});
    CHECK(e1.x == Approx(0.0).epsilon(1e-15));
    CHECK(e1.y == Approx(1.0));
    const auto e2 = two.embed({0.0, 2.0});
    CHECK(e2.x == Approx(2.0 * cosh_series(1.0)).epsilon(1e-14));
    CHECK(e2.x == Approx(3.0861613).epsilon(1e-7));
    CHECK(e2.z == 2.0);
    CHECK(one.chordal_distance({0.0, 0.0}, {std::numbers::pi, 0.0}) == Approx(2.0));
}
