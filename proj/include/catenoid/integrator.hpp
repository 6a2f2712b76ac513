#pragma once

// Adaptive explicit Runge-Kutta integration (Dormand-Prince 8(5,3)) with
// proportional-integral step control. Samples are produced by shortening
// steps so that they land exactly on the output grid, so no interpolation
// error enters the recorded trajectory.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace catenoid {

struct IntegratorConfig {
    double rel_tol{1e-12};
    double abs_tol{1e-12};
    double max_step{0.05};
    double sample_interval{0.01};
    std::size_t max_steps{20'000'000};

    /// Throws InvalidArgument when a field is outside its admissible range
    /// (tolerances in [1e-15, 1e-2], positive step bounds).
    void validate() const;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

enum class Termination { Completed, Collision, StepFailure, MaxSteps };

const char* to_string(Termination t) noexcept;

struct CollisionInfo {
    int first{-1};
    int second{-1};
    double time{0.0};
    double kernel{0.0};
};

/// Time series produced by integrate(). states[k] is the flat state vector
/// at times[k]; diagnostics[k] holds the values named in diagnostic_names.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::string> diagnostic_names;
    std::vector<std::vector<double>> diagnostics;
    Termination termination{Termination::Completed};
    std::string message;
    std::optional<CollisionInfo> collision;
    std::size_t accepted_steps{0};
    std::size_t rejected_steps{0};
    std::size_t rhs_evaluations{0};

    bool completed() const noexcept { return termination == Termination::Completed; }
    std::size_t size() const noexcept { return times.size(); }
    /// Column index of a named diagnostic; throws InvalidArgument if absent.
    std::size_t diagnostic_index(const std::string& name) const;
    /// max_k |d_k - d_0| for the named diagnostic.
    double max_drift(const std::string& name) const;
};

using RhsFunction = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using DiagnosticFunction = std::function<std::vector<double>(double t, std::span<const double> y)>;

struct Diagnostics {
    std::vector<std::string> names;
    DiagnosticFunction evaluate;
};

/// Integrates y' = f(t, y) from t0 to t_final, sampling every
/// config.sample_interval (plus t_final itself). A CoincidentVortices thrown
/// by the right-hand side ends the run with Termination::Collision; the
/// samples gathered so far are kept.
TrajectoryRecord integrate(const RhsFunction& rhs, std::vector<double> y0, double t0, double t_final,
                           const IntegratorConfig& config, const Diagnostics& diagnostics = {});

}  // namespace catenoid
