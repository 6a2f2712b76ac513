#include "catenoid/errors.hpp"
#include "catenoid/integrator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace catenoid;
using doctest::Approx;

namespace {

const RhsFunction decay = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };

const RhsFunction oscillator = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
};

const Diagnostics oscillator_energy{
    {"E"}, [](double, std::span<const double> y) { return std::vector<double>{0.5 * (y[0] * y[0] + y[1] * y[1])}; }};

}  // namespace

TEST_CASE("exponential decay") {
    const auto rec = integrate(decay, {1.0}, 0.0, 1.0, IntegratorConfig{});
    REQUIRE(rec.completed());
    CHECK(rec.times.back() == 1.0);
    CHECK(std::abs(rec.states.back()[0] - std::exp(-1.0)) <= 1e-10);
    for (std::size_t k = 0; k < rec.size(); ++k) {
        CHECK(std::abs(rec.states[k][0] - std::exp(-rec.times[k])) <= 1e-12);
    }
}

TEST_CASE("samples land on the output grid") {
    IntegratorConfig cfg;
    cfg.sample_interval = 0.1;
    const auto rec = integrate(decay, {1.0}, 2.0, 3.05, cfg);
    REQUIRE(rec.completed());
    REQUIRE(rec.size() == 12);
    for (std::size_t k = 0; k + 1 < rec.size(); ++k) CHECK(rec.times[k] == Approx(2.0 + 0.1 * k).epsilon(1e-15));
    CHECK(rec.times.back() == 3.05);
}

TEST_CASE("harmonic oscillator over a thousand periods") {
    const double t_final = 2000.0 * std::numbers::pi;
    IntegratorConfig cfg;
    cfg.sample_interval = 1.0;
    const auto rec = integrate(oscillator, {1.0, 0.0}, 0.0, t_final, cfg, oscillator_energy);
    REQUIRE(rec.completed());
    CHECK(rec.max_drift("E") / 0.5 <= 1e-8);
    CHECK(std::abs(rec.states.back()[0] - 1.0) <= 1e-7);
    CHECK(std::abs(rec.states.back()[1]) <= 1e-7);
}

TEST_CASE("error falls with the tolerance") {
    double prev = 1.0;
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        IntegratorConfig cfg;
        cfg.rel_tol = cfg.abs_tol = tol;
        cfg.max_step = 1.0;
        cfg.sample_interval = 1.0;
        const auto rec = integrate(oscillator, {1.0, 0.0}, 0.0, 20.0, cfg);
        REQUIRE(rec.completed());
        const double err = std::hypot(rec.states.back()[0] - std::cos(20.0), rec.states.back()[1] + std::sin(20.0));
        CHECK(err < prev);
        CHECK(err <= 1e3 * tol);
        prev = err;
    }
}

TEST_CASE("runs are deterministic") {
    const auto a = integrate(oscillator, {0.3, -0.2}, 0.0, 50.0, IntegratorConfig{}, oscillator_energy);
    const auto b = integrate(oscillator, {0.3, -0.2}, 0.0, 50.0, IntegratorConfig{}, oscillator_energy);
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
    CHECK(a.diagnostics == b.diagnostics);
    CHECK(a.accepted_steps == b.accepted_steps);
}

TEST_CASE("a coincidence in the rhs ends the run as a collision") {
    const RhsFunction clash = [](double t, std::span<const double> y, std::span<double> dy) {
        if (t > 0.5) throw CoincidentVortices(1, 3, 1e-14);
        dy[0] = y[0];
    };
    const auto rec = integrate(clash, {1.0}, 0.0, 1.0, IntegratorConfig{});
    CHECK(rec.termination == Termination::Collision);
    REQUIRE(rec.collision.has_value());
    CHECK(rec.collision->first == 1);
    CHECK(rec.collision->second == 3);
    CHECK(rec.collision->time <= 0.5 + 0.05);
    CHECK(rec.size() >= 50);
    CHECK(rec.times.back() <= 0.5 + 1e-12);
}

TEST_CASE("step budget and blow-up") {
    IntegratorConfig cfg;
    cfg.max_steps = 10;
    const auto capped = integrate(oscillator, {1.0, 0.0}, 0.0, 100.0, cfg);
    CHECK(capped.termination == Termination::MaxSteps);
    CHECK_FALSE(capped.completed());

    const RhsFunction blowup = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
    const auto rec = integrate(blowup, {1.0}, 0.0, 2.0, IntegratorConfig{});
    CHECK(rec.termination == Termination::StepFailure);
    CHECK(rec.times.back() < 1.0);
}

TEST_CASE("configuration validation") {
    IntegratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rel_tol = 1e-20;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.abs_tol = 0.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.max_step = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.sample_interval = -1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    CHECK_THROWS_AS(integrate(decay, {1.0}, 1.0, 0.5, IntegratorConfig{}), InvalidArgument);
    CHECK_THROWS_AS(integrate(decay, {std::nan("")}, 0.0, 1.0, IntegratorConfig{}), InvalidArgument);
}

TEST_CASE("record lookups") {
    const auto rec = integrate(oscillator, {1.0, 0.0}, 0.0, 1.0, IntegratorConfig{}, oscillator_energy);
    CHECK(rec.diagnostic_index("E") == 0);
    CHECK_THROWS_AS(rec.diagnostic_index("H"), InvalidArgument);
    CHECK(std::string(to_string(Termination::MaxSteps)) == "MaxSteps");
}
