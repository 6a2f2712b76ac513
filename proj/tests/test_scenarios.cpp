#include "catenoid/errors.hpp"
#include "catenoid/scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace catenoid;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("catenoid_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kMinimal = R"({
  "name": "pair",
  "geometry": {"a": 1.0},
  "kind": "vortices",
  "vortices": [{"u": 0.0, "v": 0.05, "gamma": 1.0}, {"u": 0.0, "v": -0.05, "gamma": -1.0}],
  "t_final": 0.5
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("json round trip of every built-in scenario") {
    const auto all = builtin_scenarios();
    CHECK(all.size() == 8);
    for (const auto& c : all) {
        CAPTURE(c.name);
        const std::string text = to_json(c);
        const auto back = scenario_from_json(text);
        CHECK(back == c);
        CHECK(to_json(back) == text);
    }
}

TEST_CASE("bundled scenario files match the catalogue") {
    const fs::path dir = CATENOID_SCENARIO_DIR;
    for (const auto& c : builtin_scenarios()) {
        CAPTURE(c.name);
        const fs::path file = dir / (c.name + ".json");
        REQUIRE(fs::exists(file));
        const auto loaded = load_scenario(file);
        CHECK(loaded == c);
        CHECK(scenario_from_json(to_json(loaded)) == loaded);
    }
}

TEST_CASE("defaults and strict parsing") {
    const auto c = scenario_from_json(kMinimal);
    CHECK(c.name == "pair");
    CHECK(c.vortices.size() == 2);
    CHECK(c.integrator == IntegratorConfig{});
    CHECK(c.analysis.kind == AnalysisKind::None);

    CHECK_THROWS_AS(scenario_from_json("{ not json"), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"t_final\"", "\"mystery\": 1, \"t_final\"")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"a\": 1.0", "\"a\": -1.0")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"vortices\"", "\"kind2\": 0, \"vortices\"")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"kind\": \"vortices\"", "\"kind\": \"fluid\"")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"gamma\": 1.0", "\"gamma\": 0.0")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"gamma\": 1.0", "\"gamma\": \"one\"")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"t_final\": 0.5", "\"t_final\": 0")), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(with(kMinimal, "\"t_final\": 0.5",
                                            "\"t_final\": 0.5, \"integrator\": {\"rel_tol\": 1}")),
                    ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("partner assignment and scattering classification") {
    const Catenoid g(1.0);
    const auto direct = direct_scattering();
    const auto p = assign_partners(g, direct.vortices);
    CHECK_FALSE(p.ambiguous);
    CHECK(p.min_ratio > kPartnerRatioGuard);

    // No evolution: partners are unchanged.
    TrajectoryRecord still;
    still.times = {0.0};
    std::vector<double> y;
    std::vector<double> gammas;
    for (const auto& v : direct.vortices) {
        y.push_back(v.u);
        y.push_back(v.v);
        gammas.push_back(v.gamma);
    }
    still.states = {y};
    CHECK(classify_scattering(g, still, gammas, p.partners).classification == ScatteringClass::Direct);
    still.termination = Termination::Collision;
    CHECK(classify_scattering(g, still, gammas, p.partners).classification == ScatteringClass::Unresolved);

    const auto r1 = run_scenario(direct);
    REQUIRE(r1.scattering.has_value());
    CHECK(r1.scattering->classification == ScatteringClass::Direct);
    const auto r2 = run_scenario(exchange_scattering());
    REQUIRE(r2.scattering.has_value());
    CHECK(r2.scattering->classification == ScatteringClass::Exchange);
    CHECK(r2.drift.max_drift.at("H") <= 1e-7);
}

TEST_CASE("co-rotating configurations") {
    for (const auto& c : {corotating_direct(), corotating_exchange()}) {
        CAPTURE(c.name);
        const auto r = run_corotating(c);
        REQUIRE(r.record.completed());
        REQUIRE(r.corotation.has_value());
        CHECK(std::abs(r.corotation->centroid_drift_rate) > 1e-3);
        CHECK(r.corotation->max_v - r.corotation->min_v < 3.0);
        CHECK(r.drift.max_drift.at("H") <= 1e-7);
        CHECK(r.drift.max_drift.at("J") <= 1e-7);
    }
    ScenarioConfig pair = corotating_direct();
    pair.vortices = {{0.0, 0.3, 1.0}, {std::numbers::pi, 0.3, 1.0}};
    pair.t_final = 10.0;
    const auto r = run_corotating(pair);
    REQUIRE(r.record.completed());
    for (const auto& y : r.record.states) {
        CHECK(std::abs(y[1] - 0.3) <= 1e-9);
        CHECK(std::abs(y[3] - 0.3) <= 1e-9);
    }
    ScenarioConfig mixed = pair;
    mixed.vortices[1].gamma = -1.0;
    CHECK_THROWS_AS(run_corotating(mixed), ConfigError);
}

TEST_CASE("geodesic comparisons of the two-vortex dipoles") {
    const auto mer = run_scenario(geodesic_meridional());
    REQUIRE(mer.comparison.has_value());
    CHECK(mer.comparison->classified == Regime::Meridional);
    CHECK(mer.drift.max_drift.at("J") <= 1e-7);
    CHECK(mer.comparison->orbit.max_deviation <= 0.05);

    const auto neck = run_scenario(geodesic_neck());
    REQUIRE(neck.comparison.has_value());
    CHECK(neck.comparison->spec.regime == Regime::Critical);
    CHECK(std::abs(std::abs(neck.comparison->spec.lambda) - 1.0) < 0.01);
    CHECK(neck.comparison->max_abs_v < 0.1);

    const auto coarse = run_scenario(geodesic_trapped(0.05));
    const auto fine = run_scenario(geodesic_trapped(0.025));
    REQUIRE(coarse.comparison.has_value());
    REQUIRE(fine.comparison.has_value());
    CHECK(coarse.comparison->classified == Regime::Supercritical);
    CHECK(coarse.comparison->min_v_above_turn >= -0.05 * 0.05);
    const double ratio = coarse.comparison->orbit.max_deviation / fine.comparison->orbit.max_deviation;
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
}

TEST_CASE("finite dipole follows a supercritical geodesic") {
    const auto r = run_scenario(finite_dipole_supercritical());
    REQUIRE(r.record.completed());
    REQUIRE(r.comparison.has_value());
    CHECK(r.comparison->classified == Regime::Supercritical);
    CHECK(r.comparison->orbit.max_deviation < 0.05);
}

TEST_CASE("outputs are written and deterministic") {
    const fs::path first = scratch_dir("first"), second = scratch_dir("second");
    const auto c = geodesic_neck();
    const auto r = run_scenario(c, first);
    (void)run_scenario(c, second);
    for (const auto& name : {c.outputs.trajectory, c.outputs.diagnostics, c.outputs.embedding}) {
        CAPTURE(name);
        REQUIRE(fs::exists(first / name));
        CHECK(slurp(first / name) == slurp(second / name));
    }
    const std::string csv = slurp(first / c.outputs.trajectory);
    CHECK(csv.rfind("t,u1,v1,u2,v2,H,J\n", 0) == 0);
    const auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(static_cast<std::size_t>(lines) == r.record.size() + 1);
    const std::string diag = slurp(first / c.outputs.diagnostics);
    CHECK(diag.find("\"termination\"") != std::string::npos);
    CHECK(diag == diagnostics_json(r) );
    fs::remove_all(first);
    fs::remove_all(second);
}

TEST_CASE("every bundled scenario completes") {
    for (const auto& c : builtin_scenarios()) {
        CAPTURE(c.name);
        const auto r = run_scenario(c);
        CHECK(r.record.completed());
    }
}
