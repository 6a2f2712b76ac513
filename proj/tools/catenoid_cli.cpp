// Command-line driver: runs scenario files, the acceptance suite, and prints
// closed-form geodesic tables.

#include "catenoid/acceptance.hpp"
#include "catenoid/errors.hpp"
#include "catenoid/geodesics.hpp"
#include "catenoid/scenarios.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace catenoid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitIntegration = 2;
constexpr int kExitConfig = 3;

std::string summary_line(const ScenarioResult& r) {
    std::string line = r.config.name + ": " + to_string(r.record.termination);
    char buf[64];
    for (const auto& [name, drift] : r.drift.max_drift) {
        std::snprintf(buf, sizeof buf, " max|d%s|=%.3g", name.c_str(), drift);
        line += buf;
    }
    if (r.scattering) line += std::string(" scattering=") + to_string(r.scattering->classification);
    if (r.corotation) {
        std::snprintf(buf, sizeof buf, " centroid_drift=%.4g", r.corotation->centroid_drift_rate);
        line += buf;
    }
    if (r.comparison) {
        std::snprintf(buf, sizeof buf, " Lambda=%.8g orbit_dev=%.3g", r.comparison->spec.lambda,
                      r.comparison->orbit.max_deviation);
        line += buf;
        line += std::string(" regime=") + to_string(r.comparison->classified);
    }
    std::snprintf(buf, sizeof buf, " (%.3fs)", r.drift.runtime_seconds);
    return line + buf;
}

int run_one(const fs::path& config_path, const fs::path& out_dir) {
    ScenarioConfig config;
    try {
        config = load_scenario(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const ScenarioResult r = run_scenario(config, out_dir);
        std::cout << summary_line(r) << "\n";
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
        return r.record.completed() ? kExitOk : kExitIntegration;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    }
}

int run_all(const fs::path& dir, const fs::path& out_dir, unsigned jobs) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) {
        std::cerr << "cannot list '" << dir.string() << "': " << ec.message() << "\n";
        return kExitConfig;
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "no scenario files in '" << dir.string() << "'\n";
        return kExitConfig;
    }

    std::vector<int> codes(files.size(), kExitOk);
    std::vector<std::string> lines(files.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            try {
                const ScenarioConfig config = load_scenario(files[i]);
                const ScenarioResult r = run_scenario(config, out_dir);
                lines[i] = summary_line(r);
                codes[i] = r.record.completed() ? kExitOk : kExitIntegration;
            } catch (const ConfigError& e) {
                lines[i] = files[i].filename().string() + ": config error: " + e.what();
                codes[i] = kExitConfig;
            } catch (const std::exception& e) {
                lines[i] = files[i].filename().string() + ": error: " + e.what();
                codes[i] = kExitIntegration;
            }
        }
    };
    jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(files.size()));
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int code = kExitOk;
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::cout << lines[i] << "\n";
        code = std::max(code, codes[i]);
    }
    return code;
}

int verify(bool quiet) {
    const auto results = run_acceptance();
    std::cout << format_acceptance(results, !quiet);
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return all_passed(results) ? kExitOk : kExitFailed;
}

int geodesic_table(double lambda, double a, double v_max, int samples, int sign) {
    const Catenoid geom(a);
    const GeodesicSpec spec = spec_from_lambda(geom, lambda, sign);
    std::cout << "# Lambda=" << lambda << " a=" << a << " regime=" << to_string(spec.regime);
    if (spec.v_turn) std::cout << " v_turn=" << *spec.v_turn;
    std::cout << "\n";
    if (spec.regime == Regime::Critical) {
        std::cout << "# the neck circle: v = 0 for all time, u advances at a constant rate\n";
        return kExitOk;
    }
    const double v_lo = spec.v_turn.value_or(0.0);
    if (!(v_max > v_lo)) {
        std::cerr << "v-max must exceed " << v_lo << "\n";
        return kExitConfig;
    }
    std::cout << "v,u\n";
    for (int k = 0; k < samples; ++k) {
        const double v = v_lo + (v_max - v_lo) * k / std::max(1, samples - 1);
        const double u = spec.regime == Regime::Meridional ? 0.0 : orbit_u_of_v(spec, geom, v, 0.0);
        std::printf("%.10g,%.12g\n", v, u);
    }
    return kExitOk;
}

int write_catalogue(const fs::path& dir) {
    for (const auto& c : builtin_scenarios()) {
        const fs::path path = dir / (c.name + ".json");
        save_scenario(c, path);
        std::cout << path.string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point vortices, finite dipoles and geodesics on the catenoid"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "output";
    auto* run = app.add_subcommand("run", "Integrate one scenario file and write its outputs");
    run->add_option("config", config_path, "Scenario JSON file")->required();
    run->add_option("--out-dir", out_dir, "Directory for trajectory and diagnostics files");

    std::string scenario_dir;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* all = app.add_subcommand("run-all", "Run every scenario file in a directory concurrently");
    all->add_option("dir", scenario_dir, "Directory of scenario JSON files")->required();
    all->add_option("--out-dir", out_dir, "Directory for outputs");
    all->add_option("-j,--jobs", jobs, "Worker threads");

    bool quiet = false;
    auto* ver = app.add_subcommand("verify", "Run the acceptance suite and print a pass/fail table");
    ver->add_flag("-q,--quiet", quiet, "Omit the informational notes");

    double lambda = 0.0;
    double a = 1.0;
    double v_max = 0.0;
    int samples = 21;
    int sign = 1;
    auto* table = app.add_subcommand("geodesic-table", "Print u(v) samples of a geodesic from the closed forms");
    table->add_option("lambda", lambda, "Orbit class parameter Lambda")->required();
    table->add_option("a", a, "Throat radius")->required()->check(CLI::PositiveNumber);
    table->add_option("--v-max", v_max, "Largest v sampled (default v_turn + 2a)");
    table->add_option("--samples", samples, "Number of rows")->check(CLI::Range(2, 100000));
    table->add_option("--sign", sign, "Orbit branch, +1 or -1")->check(CLI::IsMember({-1, 1}));

    std::string catalogue_dir;
    auto* cat = app.add_subcommand("write-scenarios", "Write the built-in scenario catalogue as JSON files");
    cat->add_option("dir", catalogue_dir, "Target directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return run_one(config_path, out_dir);
        if (*all) return run_all(scenario_dir, out_dir, jobs);
        if (*ver) return verify(quiet);
        if (*table) {
            if (v_max == 0.0) {
                const double lo = std::abs(lambda) > 1.0 ? a * std::acosh(std::abs(lambda)) : 0.0;
                v_max = lo + 2.0 * a;
            }
            return geodesic_table(lambda, a, v_max, samples, sign);
        }
        if (*cat) return write_catalogue(catalogue_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    }
    return kExitOk;
}
