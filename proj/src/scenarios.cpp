#include "catenoid/scenarios.hpp"

#include "catenoid/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace catenoid {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

bool finite(double x) { return std::isfinite(x); }

OutputPaths default_outputs(const std::string& name, bool embedding = true) {
    return {name + "_trajectory.csv", name + "_diagnostics.json", embedding ? name + "_embedding.csv" : ""};
}

ScenarioConfig vortex_scenario(std::string name, std::vector<Vortex> vortices, double t_final, AnalysisKind analysis) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.kind = ScenarioKind::Vortices;
    c.vortices = std::move(vortices);
    c.t_final = t_final;
    c.outputs = default_outputs(c.name);
    c.analysis.kind = analysis;
    return c;
}

}  // namespace

const char* to_string(ScatteringClass c) noexcept {
    switch (c) {
        case ScatteringClass::Direct: return "Direct";
        case ScatteringClass::Exchange: return "Exchange";
        case ScatteringClass::Unresolved: return "Unresolved";
    }
    return "Unknown";
}

void ScenarioConfig::validate() const {
    require(!name.empty(), "scenario name must not be empty");
    require(finite(a) && a > 0.0, "geometry.a must be finite and positive");
    require(finite(t_final) && t_final > 0.0, "t_final must be finite and positive");
    try {
        integrator.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    switch (kind) {
        case ScenarioKind::Vortices:
            require(!vortices.empty(), "a vortices scenario needs at least one vortex");
            require(dipoles.empty(), "dipoles given for a vortices scenario");
            for (const auto& w : vortices) {
                require(finite(w.u) && finite(w.v) && finite(w.gamma), "vortex fields must be finite");
                require(w.gamma != 0.0, "vortex circulation must be nonzero");
            }
            break;
        case ScenarioKind::Dipoles:
            require(!dipoles.empty(), "a dipoles scenario needs at least one dipole");
            require(vortices.empty(), "vortices given for a dipoles scenario");
            try {
                const Catenoid geom(a);
                for (const auto& d : dipoles) validate_dipole(geom, d);
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what());
            }
            break;
        case ScenarioKind::Geodesic:
            require(vortices.empty() && dipoles.empty(), "vortices or dipoles given for a geodesic scenario");
            require(finite(geodesic.u) && finite(geodesic.v) && finite(geodesic.u_dot) && finite(geodesic.v_dot),
                    "geodesic state must be finite");
            require(geodesic.u_dot != 0.0 || geodesic.v_dot != 0.0, "geodesic velocity must be nonzero");
            break;
    }
    switch (analysis.kind) {
        case AnalysisKind::None: break;
        case AnalysisKind::Scattering: {
            require(kind == ScenarioKind::Vortices, "scattering analysis needs a vortices scenario");
            const auto pos = std::count_if(vortices.begin(), vortices.end(), [](const Vortex& w) { return w.gamma > 0; });
            require(pos >= 1 && static_cast<std::size_t>(pos) < vortices.size(),
                    "scattering analysis needs vortices of both signs");
            break;
        }
        case AnalysisKind::Corotation: {
            require(kind == ScenarioKind::Vortices, "corotation analysis needs a vortices scenario");
            const bool same = std::all_of(vortices.begin(), vortices.end(),
                                          [&](const Vortex& w) { return (w.gamma > 0) == (vortices[0].gamma > 0); });
            require(same, "corotation analysis needs circulations of one sign");
            break;
        }
        case AnalysisKind::GeodesicComparison:
            require((kind == ScenarioKind::Vortices && vortices.size() == 2 && vortices[0].gamma == -vortices[1].gamma) ||
                        (kind == ScenarioKind::Dipoles && dipoles.size() == 1) || kind == ScenarioKind::Geodesic,
                    "geodesic comparison needs a +-pair of vortices, a single dipole or a geodesic");
            break;
    }
    require(finite(analysis.turn_exclusion) && analysis.turn_exclusion >= 0.0, "analysis.turn_exclusion must be >= 0");
}

PartnerAssignment assign_partners(const Catenoid& geom, std::span<const Vortex> vortices) {
    PartnerAssignment out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    std::vector<int> taken;
    for (std::size_t i = 0; i < vortices.size(); ++i) {
        if (vortices[i].gamma <= 0.0) continue;
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        int partner = -1;
        for (std::size_t j = 0; j < vortices.size(); ++j) {
            if (vortices[j].gamma >= 0.0) continue;
            const double d = geom.chordal_distance({vortices[i].u, vortices[i].v}, {vortices[j].u, vortices[j].v});
            if (d < best) {
                second = best;
                best = d;
                partner = static_cast<int>(j);
            } else if (d < second) {
                second = d;
            }
        }
        out.partners[static_cast<int>(i)] = partner;
        const double ratio = best > 0.0 ? second / best : std::numeric_limits<double>::infinity();
        out.min_ratio = std::min(out.min_ratio, ratio);
        if (std::find(taken.begin(), taken.end(), partner) != taken.end()) out.ambiguous = true;
        taken.push_back(partner);
    }
    if (out.min_ratio < kPartnerRatioGuard) out.ambiguous = true;
    return out;
}

ScatteringOutcome classify_scattering(const Catenoid& geom, const TrajectoryRecord& record,
                                      std::span<const double> gammas, const PartnerMap& initial_partners) {
    ScatteringOutcome out;
    out.initial_partners = initial_partners;
    if (record.states.empty()) {
        return out;
    }
    const std::size_t n = gammas.size();
    auto vortices_at = [&](std::size_t k) {
        std::vector<Vortex> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = {record.states[k][2 * i], record.states[k][2 * i + 1], gammas[i]};
        return w;
    };
    for (std::size_t k = 0; k < record.size(); ++k) {
        const auto w = vortices_at(k);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = geom.chordal_distance({w[i].u, w[i].v}, {w[j].u, w[j].v});
                auto key = std::make_pair(static_cast<int>(i), static_cast<int>(j));
                auto it = out.min_separation.find(key);
                if (it == out.min_separation.end() || d < it->second) out.min_separation[key] = d;
            }
        }
    }
    const PartnerAssignment last = assign_partners(geom, vortices_at(record.size() - 1));
    out.final_partners = last.partners;
    out.partner_ratio = last.min_ratio;
    if (!record.completed() || last.ambiguous) {
        out.classification = ScatteringClass::Unresolved;
    } else if (last.partners == initial_partners) {
        out.classification = ScatteringClass::Direct;
    } else {
        const bool all_swapped = std::all_of(last.partners.begin(), last.partners.end(), [&](const auto& kv) {
            const auto it = initial_partners.find(kv.first);
            return it != initial_partners.end() && it->second != kv.second;
        });
        out.classification = all_swapped ? ScatteringClass::Exchange : ScatteringClass::Unresolved;
    }
    return out;
}

CorotationSummary summarize_corotation(const TrajectoryRecord& record, std::size_t vortex_count) {
    CorotationSummary out;
    if (record.states.empty() || vortex_count == 0) return out;
    auto mean_u = [&](const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < vortex_count; ++i) s += y[2 * i];
        return s / static_cast<double>(vortex_count);
    };
    out.min_v = std::numeric_limits<double>::infinity();
    out.max_v = -out.min_v;
    for (const auto& y : record.states) {
        for (std::size_t i = 0; i < vortex_count; ++i) {
            out.min_v = std::min(out.min_v, y[2 * i + 1]);
            out.max_v = std::max(out.max_v, y[2 * i + 1]);
        }
    }
    const double span = record.times.back() - record.times.front();
    if (span > 0.0) {
        out.centroid_drift_rate = (mean_u(record.states.back()) - mean_u(record.states.front())) / span;
    }
    return out;
}

GeodesicState dipole_center_state(const ScenarioConfig& config, std::span<const double> y) {
    const Catenoid geom(config.a);
    switch (config.kind) {
        case ScenarioKind::Vortices: {
            const VortexSystem sys(geom, config.vortices);
            std::vector<double> dydt(y.size());
            sys.rhs(y, dydt);
            const double n = static_cast<double>(sys.size());
            GeodesicState s;
            for (std::size_t i = 0; i < sys.size(); ++i) {
                s.u += y[2 * i] / n;
                s.v += y[2 * i + 1] / n;
                s.u_dot += dydt[2 * i] / n;
                s.v_dot += dydt[2 * i + 1] / n;
            }
            return s;
        }
        case ScenarioKind::Dipoles: {
            const DipoleSystem sys(geom, config.dipoles, config.propulsion);
            std::vector<double> dydt(y.size());
            sys.rhs(y, dydt);
            return {y[0], y[1], dydt[0], dydt[1]};
        }
        case ScenarioKind::Geodesic:
            return {y[0], y[1], y[2], y[3]};
    }
    return {};
}

GeodesicComparison compare_dipole_to_geodesic(const ScenarioConfig& config, const TrajectoryRecord& record) {
    if (record.states.empty()) {
        throw InvalidArgument("compare_dipole_to_geodesic: empty trajectory");
    }
    const Catenoid geom(config.a);
    GeodesicComparison out;
    std::vector<OrbitSample> path;
    std::vector<double> u_rates;
    path.reserve(record.size());
    for (const auto& y : record.states) {
        const GeodesicState s = dipole_center_state(config, y);
        path.push_back({s.u, s.v, s.v_dot});
        u_rates.push_back(s.u_dot);
        out.max_abs_v = std::max(out.max_abs_v, std::abs(s.v));
    }
    out.spec = classify(geom, dipole_center_state(config, record.states.front()));
    out.classified = out.spec.regime;
    if (config.analysis.regime && *config.analysis.regime != out.spec.regime) {
        const Regime forced = *config.analysis.regime;
        if (forced == Regime::Supercritical && std::abs(out.spec.lambda) < 1.0) {
            throw WrongRegime("cannot compare a |Lambda| < 1 path against a supercritical geodesic");
        }
        out.spec.regime = forced;
        out.spec.v_turn.reset();
        if (forced == Regime::Supercritical) {
            out.spec.v_turn = config.a * std::acosh(std::abs(out.spec.lambda));
        }
    }
    out.orbit = orbit_deviation(geom, out.spec, path, config.analysis.turn_exclusion * config.a);
    if (out.spec.v_turn) {
        out.min_v_above_turn = std::numeric_limits<double>::infinity();
        for (const auto& p : path) out.min_v_above_turn = std::min(out.min_v_above_turn, std::abs(p.v) - *out.spec.v_turn);
    }
    const auto [lo, hi] = std::minmax_element(u_rates.begin(), u_rates.end());
    out.u_rate_spread = *hi - *lo;
    return out;
}

GeodesicComparison compare_dipole_to_geodesic(const ScenarioConfig& config) {
    const ScenarioResult r = run_scenario(config);
    if (r.comparison) return *r.comparison;
    return compare_dipole_to_geodesic(config, r.record);
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::optional<std::filesystem::path>& out_dir) {
    config.validate();
    ScenarioResult res;
    res.config = config;
    const Catenoid geom(config.a);
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> gammas;
    switch (config.kind) {
        case ScenarioKind::Vortices: {
            const VortexSystem sys(geom, config.vortices);
            gammas = sys.circulations();
            res.record = sys.integrate(config.t_final, config.integrator);
            break;
        }
        case ScenarioKind::Dipoles: {
            const DipoleSystem sys(geom, config.dipoles, config.propulsion);
            res.warnings = sys.warnings();
            res.record = sys.integrate(config.t_final, config.integrator);
            break;
        }
        case ScenarioKind::Geodesic:
            res.record = integrate_geodesic(geom, config.geodesic, config.t_final, config.integrator);
            break;
    }
    res.drift.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& name : res.record.diagnostic_names) {
        res.drift.max_drift[name] = res.record.max_drift(name);
    }
    if (!res.record.completed()) {
        res.warnings.push_back(std::string("integration ended early: ") + to_string(res.record.termination) + ": " +
                               res.record.message);
    }

    switch (config.analysis.kind) {
        case AnalysisKind::None: break;
        case AnalysisKind::Scattering: {
            const PartnerAssignment initial = assign_partners(geom, config.vortices);
            if (initial.ambiguous) res.warnings.push_back("initial partner assignment is ambiguous");
            res.scattering = classify_scattering(geom, res.record, gammas, initial.partners);
            break;
        }
        case AnalysisKind::Corotation:
            res.corotation = summarize_corotation(res.record, config.vortices.size());
            break;
        case AnalysisKind::GeodesicComparison:
            res.comparison = compare_dipole_to_geodesic(config, res.record);
            break;
    }

    if (out_dir) {
        auto resolve = [&](const std::string& p) { return *out_dir / p; };
        if (!config.outputs.trajectory.empty()) write_trajectory_csv(config, res.record, resolve(config.outputs.trajectory));
        if (!config.outputs.embedding.empty()) write_embedding_csv(config, res.record, resolve(config.outputs.embedding));
        if (!config.outputs.diagnostics.empty()) write_diagnostics_json(res, resolve(config.outputs.diagnostics));
    }
    return res;
}

ScenarioResult run_corotating(const ScenarioConfig& config) {
    ScenarioConfig c = config;
    c.analysis.kind = AnalysisKind::Corotation;
    return run_scenario(c);
}

ScenarioConfig geodesic_meridional(double eps) {
    auto c = vortex_scenario("geodesic-meridional", {{eps, -2.0, 1.0}, {-eps, -2.0, -1.0}}, 10.0,
                             AnalysisKind::GeodesicComparison);
    return c;
}

ScenarioConfig geodesic_neck(double eps) {
    auto c = vortex_scenario("geodesic-neck", {{0.0, eps, 1.0}, {0.0, -eps, -1.0}}, 10.0,
                             AnalysisKind::GeodesicComparison);
    c.analysis.regime = Regime::Critical;
    return c;
}

ScenarioConfig geodesic_trapped(double eps, double v_center) {
    return vortex_scenario("geodesic-trapped", {{0.0, v_center + eps, 1.0}, {0.0, v_center - eps, -1.0}}, 10.0,
                           AnalysisKind::GeodesicComparison);
}

std::vector<Vortex> four_vortex_setup(double eps, double delta, std::span<const double> gammas) {
    if (gammas.size() != 4) {
        throw InvalidArgument("four_vortex_setup needs four circulations");
    }
    // Listed points are (v, u).
    const double vu[4][2] = {{0.0, eps}, {eps, 0.0}, {1.0 - delta, 1.0}, {1.0, 1.0 - delta}};
    std::vector<Vortex> out(4);
    for (int i = 0; i < 4; ++i) out[i] = {vu[i][1], vu[i][0], gammas[i]};
    return out;
}

namespace {
constexpr double kScatteringGammas[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kCorotatingGammas[4] = {1.0, 1.0, 1.0, 1.0};
}  // namespace

ScenarioConfig direct_scattering() {
    return vortex_scenario("direct-scattering", four_vortex_setup(0.07, 0.03, kScatteringGammas), 0.5,
                           AnalysisKind::Scattering);
}

ScenarioConfig exchange_scattering() {
    return vortex_scenario("exchange-scattering", four_vortex_setup(0.05, 0.05, kScatteringGammas), 0.5,
                           AnalysisKind::Scattering);
}

ScenarioConfig corotating_direct() {
    return vortex_scenario("corotating-direct", four_vortex_setup(0.07, 0.03, kCorotatingGammas), 10.0,
                           AnalysisKind::Corotation);
}

ScenarioConfig corotating_exchange() {
    return vortex_scenario("corotating-exchange", four_vortex_setup(0.05, 0.05, kCorotatingGammas), 10.0,
                           AnalysisKind::Corotation);
}

ScenarioConfig finite_dipole_supercritical(double ell, PropulsionMode mode) {
    ScenarioConfig c;
    c.name = "finite-dipole-supercritical";
    c.kind = ScenarioKind::Dipoles;
    c.dipoles = {{0.0, 0.15, 0.5 * std::numbers::pi, ell, 1.0}};
    c.propulsion = mode;
    c.t_final = 3.0;
    c.outputs = default_outputs(c.name);
    c.analysis.kind = AnalysisKind::GeodesicComparison;
    return c;
}

std::vector<ScenarioConfig> builtin_scenarios() {
    return {geodesic_meridional(), geodesic_neck(),         geodesic_trapped(),    direct_scattering(),
            exchange_scattering(), corotating_direct(),     corotating_exchange(), finite_dipole_supercritical()};
}

}  // namespace catenoid
