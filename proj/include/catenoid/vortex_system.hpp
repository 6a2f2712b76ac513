#pragma once

// N point vortices on the catenoid. Flat state layout: [u0, v0, u1, v1, ...];
// circulations are parameters of the system, not part of the state.
//
//   v_i' = 1/(4 pi a h_i^2) sum_j G_j sin(u_i - u_j) / F_ij
//   u_i' = -1/(4 pi a^2 h_i^2) sum_j G_j sinh((v_i - v_j)/a) / F_ij
//          + G_i tanh(v_i/a) / (4 pi a^2 h_i^2)

#include "catenoid/geometry.hpp"
#include "catenoid/integrator.hpp"

#include <span>
#include <vector>

namespace catenoid {

struct Vortex {
    double u{0.0};
    double v{0.0};
    double gamma{1.0};

    friend bool operator==(const Vortex&, const Vortex&) = default;
};

struct VortexVelocity {
    double u_dot{0.0};
    double v_dot{0.0};
};

struct VortexDiagnostics {
    double t{0.0};
    double H{0.0};
    double J{0.0};
};

/// Velocity that vortex `source` (circulation gamma_source) induces at target.
/// Throws CoincidentVortices when the pair kernel is below the cutoff.
VortexVelocity pair_velocity(const Catenoid& geom, SurfacePoint target, SurfacePoint source, double gamma_source);

/// Curvature self-advection of a vortex of circulation gamma at v.
VortexVelocity self_velocity(const Catenoid& geom, double v, double gamma);

class VortexSystem {
public:
    /// Throws InvalidArgument for an empty set, a zero circulation or
    /// non-finite coordinates.
    VortexSystem(Catenoid geom, std::vector<Vortex> vortices);

    const Catenoid& geometry() const noexcept { return geom_; }
    std::size_t size() const noexcept { return gammas_.size(); }
    const std::vector<double>& circulations() const noexcept { return gammas_; }

    std::vector<double> initial_state() const { return initial_; }
    std::vector<Vortex> vortices(std::span<const double> y) const;

    /// Velocities of every vortex; dydt uses the state layout.
    void rhs(std::span<const double> y, std::span<double> dydt) const;
    double hamiltonian(std::span<const double> y) const;
    double momentum_map(std::span<const double> y) const;

    /// Diagnostics "H" and "J" for the integrator.
    Diagnostics diagnostics() const;
    RhsFunction rhs_function() const;

    /// Integrates from the initial state to t_final.
    TrajectoryRecord integrate(double t_final, const IntegratorConfig& config) const;

private:
    Catenoid geom_;
    std::vector<double> gammas_;
    std::vector<double> initial_;
};

double hamiltonian(const Catenoid& geom, std::span<const Vortex> vortices);
double momentum_map(const Catenoid& geom, std::span<const Vortex> vortices);
std::vector<VortexVelocity> rhs(const Catenoid& geom, std::span<const Vortex> vortices);
VortexDiagnostics diagnostics(const Catenoid& geom, std::span<const Vortex> vortices, double t = 0.0);

/// Max over vortices of the mismatch between rhs and the Hamiltonian
/// gradient divided by the symplectic weight G_i a h_i^2, with central
/// differences of step h_step.
double hamiltonian_consistency_check(const Catenoid& geom, std::span<const Vortex> vortices, double h_step);

/// sum_i G_i a h_i^2 v_i', zero in exact arithmetic.
double momentum_map_rate(const Catenoid& geom, std::span<const Vortex> vortices);

}  // namespace catenoid
