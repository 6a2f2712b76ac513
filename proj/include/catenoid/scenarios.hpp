#pragma once

// Scenario configs, the built-in catalogue of experiments, and the
// analyses run on their trajectories (scattering partners, co-rotation
// drift, orbit-form comparison with the matched geodesic).

#include "catenoid/dipole_model.hpp"
#include "catenoid/geodesics.hpp"
#include "catenoid/integrator.hpp"
#include "catenoid/vortex_system.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace catenoid {

enum class ScenarioKind { Vortices, Dipoles, Geodesic };

enum class AnalysisKind { None, Scattering, Corotation, GeodesicComparison };

const char* to_string(ScenarioKind k) noexcept;
const char* to_string(AnalysisKind k) noexcept;

struct OutputPaths {
    std::string trajectory;
    std::string diagnostics;
    std::string embedding;  // empty: not written

    friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct AnalysisSpec {
    AnalysisKind kind{AnalysisKind::None};
    /// Regime the comparison assumes instead of the one classify() picks;
    /// needed for the neck circle, which a finite dipole only approximates.
    std::optional<Regime> regime;
    /// Supercritical samples this close to the turning point are skipped.
    double turn_exclusion{1e-4};

    friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct ScenarioConfig {
    std::string name;
    double a{1.0};
    ScenarioKind kind{ScenarioKind::Vortices};
    std::vector<Vortex> vortices;
    std::vector<DipoleState> dipoles;
    PropulsionMode propulsion{PropulsionMode::Full};
    GeodesicState geodesic;
    double t_final{1.0};
    IntegratorConfig integrator;
    OutputPaths outputs;
    AnalysisSpec analysis;

    /// Throws ConfigError on inconsistent or out-of-range fields.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// JSON round trip. Parsing throws ConfigError with the offending field.
std::string to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path);

enum class ScatteringClass { Direct, Exchange, Unresolved };

const char* to_string(ScatteringClass c) noexcept;

/// Partner of each positive vortex: index of its nearest negative vortex.
using PartnerMap = std::map<int, int>;

/// Smallest ratio second-nearest / nearest below which a pairing is ambiguous.
inline constexpr double kPartnerRatioGuard = 1.5;

struct PartnerAssignment {
    PartnerMap partners;
    double min_ratio{0.0};  // worst second-nearest / nearest over positives
    bool ambiguous{false};
};

/// Nearest opposite-sign partners by chordal distance in the embedding.
PartnerAssignment assign_partners(const Catenoid& geom, std::span<const Vortex> vortices);

struct ScatteringOutcome {
    ScatteringClass classification{ScatteringClass::Unresolved};
    PartnerMap initial_partners;
    PartnerMap final_partners;
    double partner_ratio{0.0};
    /// min over the run of the chordal distance, keyed by (i, j), i < j.
    std::map<std::pair<int, int>, double> min_separation;
};

ScatteringOutcome classify_scattering(const Catenoid& geom, const TrajectoryRecord& record,
                                      std::span<const double> gammas, const PartnerMap& initial_partners);

struct CorotationSummary {
    double centroid_drift_rate{0.0};  // (mean u at t_f - mean u at 0) / t_f
    double min_v{0.0};
    double max_v{0.0};
};

CorotationSummary summarize_corotation(const TrajectoryRecord& record, std::size_t vortex_count);

struct GeodesicComparison {
    GeodesicSpec spec;       // matched geodesic, regime possibly overridden
    Regime classified{Regime::Meridional};
    OrbitComparison orbit;
    double min_v_above_turn{0.0};  // min over samples of |v| - v_turn (supercritical)
    double u_rate_spread{0.0};     // max - min of u' over samples
    double max_abs_v{0.0};
};

struct DriftSummary {
    std::map<std::string, double> max_drift;  // per diagnostic
    double runtime_seconds{0.0};
};

struct ScenarioResult {
    ScenarioConfig config;
    TrajectoryRecord record;
    DriftSummary drift;
    std::vector<std::string> warnings;
    std::optional<ScatteringOutcome> scattering;
    std::optional<CorotationSummary> corotation;
    std::optional<GeodesicComparison> comparison;
};

/// Integrates the scenario and runs its analysis. Output files are written
/// only when out_dir is given; relative output paths resolve against it.
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// run_scenario for a co-rotating vortex config (all circulations one sign).
ScenarioResult run_corotating(const ScenarioConfig& config);

/// Matched-geodesic comparison of a two-vortex or single-dipole run.
GeodesicComparison compare_dipole_to_geodesic(const ScenarioConfig& config, const TrajectoryRecord& record);
GeodesicComparison compare_dipole_to_geodesic(const ScenarioConfig& config);

/// Center (mean of the pair, or the dipole center) and its velocity at state y.
GeodesicState dipole_center_state(const ScenarioConfig& config, std::span<const double> y);

// Output writers. CSV columns: t, per-body coordinates, diagnostics.
void write_trajectory_csv(const ScenarioConfig& config, const TrajectoryRecord& record, const std::filesystem::path& path);
void write_embedding_csv(const ScenarioConfig& config, const TrajectoryRecord& record, const std::filesystem::path& path);
void write_diagnostics_json(const ScenarioResult& result, const std::filesystem::path& path);
std::string diagnostics_json(const ScenarioResult& result);

// Built-in catalogue of experiments.
ScenarioConfig geodesic_meridional(double eps = 0.05);
ScenarioConfig geodesic_neck(double eps = 0.05);
ScenarioConfig geodesic_trapped(double eps = 0.05, double v_center = 0.15);
/// Four vortices {(0,eps), (eps,0), (1-delta,1), (1,1-delta)} read as (v, u).
std::vector<Vortex> four_vortex_setup(double eps, double delta, std::span<const double> gammas);
ScenarioConfig direct_scattering();
ScenarioConfig exchange_scattering();
ScenarioConfig corotating_direct();
ScenarioConfig corotating_exchange();
ScenarioConfig finite_dipole_supercritical(double ell = 0.1, PropulsionMode mode = PropulsionMode::Full);
std::vector<ScenarioConfig> builtin_scenarios();

}  // namespace catenoid
