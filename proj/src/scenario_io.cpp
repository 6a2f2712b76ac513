#include "catenoid/errors.hpp"
#include "catenoid/scenarios.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace catenoid {

using nlohmann::ordered_json;

namespace {

std::string lower(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void reject_unknown(const ordered_json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) config_error(where, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) config_error(where, "unknown field '" + key + "'");
    }
}

double number(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) config_error(where, "missing field '" + key + "'");
    const auto& x = j.at(key);
    if (!x.is_number()) config_error(where + "." + key, "expected a number");
    return x.get<double>();
}

double number_or(const ordered_json& j, const std::string& key, const std::string& where, double fallback) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

std::string text(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) config_error(where, "missing field '" + key + "'");
    const auto& x = j.at(key);
    if (!x.is_string()) config_error(where + "." + key, "expected a string");
    return x.get<std::string>();
}

std::string text_or(const ordered_json& j, const std::string& key, const std::string& where, std::string fallback) {
    return j.contains(key) ? text(j, key, where) : fallback;
}

ScenarioKind parse_kind(const std::string& s) {
    const std::string k = lower(s);
    if (k == "vortices") return ScenarioKind::Vortices;
    if (k == "dipoles") return ScenarioKind::Dipoles;
    if (k == "geodesic") return ScenarioKind::Geodesic;
    config_error("kind", "expected vortices, dipoles or geodesic, got '" + s + "'");
}

AnalysisKind parse_analysis(const std::string& s) {
    const std::string k = lower(s);
    if (k == "none") return AnalysisKind::None;
    if (k == "scattering") return AnalysisKind::Scattering;
    if (k == "corotation") return AnalysisKind::Corotation;
    if (k == "geodesic_comparison") return AnalysisKind::GeodesicComparison;
    config_error("analysis.kind", "unknown analysis '" + s + "'");
}

Regime parse_regime(const std::string& s) {
    const std::string k = lower(s);
    if (k == "meridional") return Regime::Meridional;
    if (k == "subcritical") return Regime::Subcritical;
    if (k == "critical") return Regime::Critical;
    if (k == "supercritical") return Regime::Supercritical;
    config_error("analysis.regime", "unknown regime '" + s + "'");
}

PropulsionMode parse_propulsion(const std::string& s) {
    const std::string k = lower(s);
    if (k == "full") return PropulsionMode::Full;
    if (k == "truncated") return PropulsionMode::Truncated;
    config_error("propulsion", "expected full or truncated, got '" + s + "'");
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

// Per-body coordinate columns of one sample.
std::size_t bodies(const ScenarioConfig& c) {
    switch (c.kind) {
        case ScenarioKind::Vortices: return c.vortices.size();
        case ScenarioKind::Dipoles: return c.dipoles.size();
        case ScenarioKind::Geodesic: return 1;
    }
    return 0;
}

}  // namespace

const char* to_string(ScenarioKind k) noexcept {
    switch (k) {
        case ScenarioKind::Vortices: return "vortices";
        case ScenarioKind::Dipoles: return "dipoles";
        case ScenarioKind::Geodesic: return "geodesic";
    }
    return "unknown";
}

const char* to_string(AnalysisKind k) noexcept {
    switch (k) {
        case AnalysisKind::None: return "none";
        case AnalysisKind::Scattering: return "scattering";
        case AnalysisKind::Corotation: return "corotation";
        case AnalysisKind::GeodesicComparison: return "geodesic_comparison";
    }
    return "unknown";
}

std::string to_json(const ScenarioConfig& c) {
    ordered_json j;
    j["name"] = c.name;
    j["geometry"] = {{"a", c.a}};
    j["kind"] = to_string(c.kind);
    switch (c.kind) {
        case ScenarioKind::Vortices: {
            ordered_json list = ordered_json::array();
            for (const auto& w : c.vortices) list.push_back({{"u", w.u}, {"v", w.v}, {"gamma", w.gamma}});
            j["vortices"] = list;
            break;
        }
        case ScenarioKind::Dipoles: {
            ordered_json list = ordered_json::array();
            for (const auto& d : c.dipoles) {
                list.push_back({{"u", d.u}, {"v", d.v}, {"alpha", d.alpha}, {"ell", d.ell}, {"mu", d.mu}});
            }
            j["dipoles"] = list;
            j["propulsion"] = to_string(c.propulsion);
            break;
        }
        case ScenarioKind::Geodesic:
            j["geodesic"] = {{"u", c.geodesic.u}, {"v", c.geodesic.v}, {"u_dot", c.geodesic.u_dot},
                             {"v_dot", c.geodesic.v_dot}};
            break;
    }
    j["t_final"] = c.t_final;
    j["integrator"] = {{"rel_tol", c.integrator.rel_tol},
                       {"abs_tol", c.integrator.abs_tol},
                       {"max_step", c.integrator.max_step},
                       {"sample_interval", c.integrator.sample_interval},
                       {"max_steps", c.integrator.max_steps}};
    j["outputs"] = {{"trajectory", c.outputs.trajectory},
                    {"diagnostics", c.outputs.diagnostics},
                    {"embedding", c.outputs.embedding}};
    ordered_json analysis = {{"kind", to_string(c.analysis.kind)}};
    if (c.analysis.regime) analysis["regime"] = lower(to_string(*c.analysis.regime));
    analysis["turn_exclusion"] = c.analysis.turn_exclusion;
    j["analysis"] = analysis;
    return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& source) {
    ordered_json j;
    try {
        j = ordered_json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(j, "scenario",
                   {"name", "geometry", "kind", "vortices", "dipoles", "propulsion", "geodesic", "t_final",
                    "integrator", "outputs", "analysis"});
    ScenarioConfig c;
    c.name = text(j, "name", "scenario");
    if (!j.contains("geometry")) config_error("scenario", "missing field 'geometry'");
    reject_unknown(j["geometry"], "geometry", {"a"});
    c.a = number(j["geometry"], "a", "geometry");
    c.kind = parse_kind(text(j, "kind", "scenario"));

    if (j.contains("vortices")) {
        if (!j["vortices"].is_array()) config_error("vortices", "expected an array");
        for (std::size_t i = 0; i < j["vortices"].size(); ++i) {
            const std::string where = "vortices[" + std::to_string(i) + "]";
            const auto& w = j["vortices"][i];
            reject_unknown(w, where, {"u", "v", "gamma"});
            c.vortices.push_back({number(w, "u", where), number(w, "v", where), number(w, "gamma", where)});
        }
    }
    if (j.contains("dipoles")) {
        if (!j["dipoles"].is_array()) config_error("dipoles", "expected an array");
        for (std::size_t i = 0; i < j["dipoles"].size(); ++i) {
            const std::string where = "dipoles[" + std::to_string(i) + "]";
            const auto& d = j["dipoles"][i];
            reject_unknown(d, where, {"u", "v", "alpha", "ell", "mu"});
            c.dipoles.push_back({number(d, "u", where), number(d, "v", where), number(d, "alpha", where),
                                 number(d, "ell", where), number_or(d, "mu", where, 1.0)});
        }
    }
    c.propulsion = parse_propulsion(text_or(j, "propulsion", "scenario", "full"));
    if (j.contains("geodesic")) {
        const auto& g = j["geodesic"];
        reject_unknown(g, "geodesic", {"u", "v", "u_dot", "v_dot"});
        c.geodesic = {number(g, "u", "geodesic"), number(g, "v", "geodesic"), number(g, "u_dot", "geodesic"),
                      number(g, "v_dot", "geodesic")};
    }
    c.t_final = number(j, "t_final", "scenario");

    if (j.contains("integrator")) {
        const auto& in = j["integrator"];
        reject_unknown(in, "integrator", {"rel_tol", "abs_tol", "max_step", "sample_interval", "max_steps"});
        const IntegratorConfig d;
        c.integrator.rel_tol = number_or(in, "rel_tol", "integrator", d.rel_tol);
        c.integrator.abs_tol = number_or(in, "abs_tol", "integrator", d.abs_tol);
        c.integrator.max_step = number_or(in, "max_step", "integrator", d.max_step);
        c.integrator.sample_interval = number_or(in, "sample_interval", "integrator", d.sample_interval);
        if (in.contains("max_steps")) {
            if (!in["max_steps"].is_number_unsigned()) config_error("integrator.max_steps", "expected a positive integer");
            c.integrator.max_steps = in["max_steps"].get<std::size_t>();
        }
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        reject_unknown(o, "outputs", {"trajectory", "diagnostics", "embedding"});
        c.outputs = {text_or(o, "trajectory", "outputs", ""), text_or(o, "diagnostics", "outputs", ""),
                     text_or(o, "embedding", "outputs", "")};
    }
    if (j.contains("analysis")) {
        const auto& an = j["analysis"];
        reject_unknown(an, "analysis", {"kind", "regime", "turn_exclusion"});
        c.analysis.kind = parse_analysis(text_or(an, "kind", "analysis", "none"));
        if (an.contains("regime")) c.analysis.regime = parse_regime(text(an, "regime", "analysis"));
        c.analysis.turn_exclusion = number_or(an, "turn_exclusion", "analysis", c.analysis.turn_exclusion);
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read scenario file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << to_json(config);
}

void write_trajectory_csv(const ScenarioConfig& c, const TrajectoryRecord& r, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "t";
    for (std::size_t i = 1; i <= bodies(c); ++i) {
        switch (c.kind) {
            case ScenarioKind::Vortices: out << ",u" << i << ",v" << i; break;
            case ScenarioKind::Dipoles: out << ",u" << i << ",v" << i << ",alpha" << i; break;
            case ScenarioKind::Geodesic: out << ",u,v,u_dot,v_dot"; break;
        }
    }
    for (const auto& name : r.diagnostic_names) out << "," << name;
    out << "\n";
    for (std::size_t k = 0; k < r.size(); ++k) {
        out << fmt(r.times[k]);
        for (double x : r.states[k]) out << "," << fmt(x);
        if (k < r.diagnostics.size()) {
            for (double x : r.diagnostics[k]) out << "," << fmt(x);
        }
        out << "\n";
    }
}

void write_embedding_csv(const ScenarioConfig& c, const TrajectoryRecord& r, const std::filesystem::path& path) {
    const Catenoid geom(c.a);
    const std::size_t n = bodies(c);
    const std::size_t stride = c.kind == ScenarioKind::Vortices ? 2 : (c.kind == ScenarioKind::Dipoles ? 3 : 4);
    auto out = open_output(path);
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x" << i << ",y" << i << ",z" << i;
    out << "\n";
    for (std::size_t k = 0; k < r.size(); ++k) {
        out << fmt(r.times[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 p = geom.embed({r.states[k][stride * i], r.states[k][stride * i + 1]});
            out << "," << fmt(p.x) << "," << fmt(p.y) << "," << fmt(p.z);
        }
        out << "\n";
    }
}

std::string diagnostics_json(const ScenarioResult& res) {
    const auto& r = res.record;
    ordered_json j;
    j["name"] = res.config.name;
    j["kind"] = to_string(res.config.kind);
    j["a"] = res.config.a;
    j["t_final"] = res.config.t_final;
    j["termination"] = to_string(r.termination);
    if (!r.message.empty()) j["message"] = r.message;
    if (r.collision) {
        j["collision"] = {{"first", r.collision->first},
                          {"second", r.collision->second},
                          {"time", r.collision->time},
                          {"kernel", r.collision->kernel}};
    }
    j["samples"] = r.size();
    j["t_end"] = r.times.empty() ? 0.0 : r.times.back();
    j["accepted_steps"] = r.accepted_steps;
    j["rejected_steps"] = r.rejected_steps;
    j["rhs_evaluations"] = r.rhs_evaluations;
    ordered_json drift = ordered_json::object();
    for (const auto& [name, value] : res.drift.max_drift) drift[name] = value;
    j["max_drift"] = drift;
    j["warnings"] = res.warnings;
    if (res.scattering) {
        const auto& s = *res.scattering;
        ordered_json sj;
        sj["classification"] = to_string(s.classification);
        auto partners = [](const PartnerMap& m) {
            ordered_json p = ordered_json::object();
            for (const auto& [pos, neg] : m) p[std::to_string(pos)] = neg;
            return p;
        };
        sj["initial_partners"] = partners(s.initial_partners);
        sj["final_partners"] = partners(s.final_partners);
        sj["partner_ratio"] = s.partner_ratio;
        ordered_json sep = ordered_json::object();
        for (const auto& [pair, d] : s.min_separation) {
            sep[std::to_string(pair.first) + "-" + std::to_string(pair.second)] = d;
        }
        sj["min_separation"] = sep;
        j["scattering"] = sj;
    }
    if (res.corotation) {
        j["corotation"] = {{"centroid_drift_rate", res.corotation->centroid_drift_rate},
                           {"min_v", res.corotation->min_v},
                           {"max_v", res.corotation->max_v}};
    }
    if (res.comparison) {
        const auto& g = *res.comparison;
        ordered_json gj;
        gj["lambda"] = g.spec.lambda;
        gj["classified_regime"] = to_string(g.classified);
        gj["compared_regime"] = to_string(g.spec.regime);
        if (g.spec.v_turn) {
            gj["v_turn"] = *g.spec.v_turn;
            gj["min_v_above_turn"] = g.min_v_above_turn;
        }
        gj["max_orbit_deviation"] = g.orbit.max_deviation;
        gj["compared_samples"] = g.orbit.compared;
        gj["excluded_samples"] = g.orbit.excluded;
        gj["u_rate_spread"] = g.u_rate_spread;
        gj["max_abs_v"] = g.max_abs_v;
        j["geodesic_comparison"] = gj;
    }
    return j.dump(2) + "\n";
}

void write_diagnostics_json(const ScenarioResult& result, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << diagnostics_json(result);
}

}  // namespace catenoid
