#pragma once

// Finite-dipole reduction: each dipole is a center (u, v), an orientation
// alpha measured from e_u, a fixed separation ell and a strength mu. Its
// vortices sit at
//
//   u_pm = u +- ell cos(alpha) / (2 a h),   v_pm = v +- ell sin(alpha) / (2 h)
//
// with circulations +mu and -mu. Flat state layout: [u0, v0, alpha0, u1, ...].

#include "catenoid/geometry.hpp"
#include "catenoid/integrator.hpp"
#include "catenoid/vortex_system.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace catenoid {

enum class PropulsionMode { Truncated, Full };

const char* to_string(PropulsionMode m) noexcept;

/// ell / a above this draws a warning.
inline constexpr double kDipoleWarnRatio = 0.3;
/// ell / a above this is rejected.
inline constexpr double kDipoleMaxRatio = 0.6;

struct DipoleState {
    double u{0.0};
    double v{0.0};
    double alpha{0.0};
    double ell{0.1};
    double mu{1.0};

    friend bool operator==(const DipoleState&, const DipoleState&) = default;
};

struct PlacedPair {
    SurfacePoint plus;
    SurfacePoint minus;
    double gamma_plus{1.0};
    double gamma_minus{-1.0};
};

struct CenterVelocity {
    double u_dot{0.0};
    double v_dot{0.0};
};

/// Mean advection of dipole n by every vortex of the other dipoles, and the
/// raw velocities of its two vortices that it averages.
struct ExternalAdvection {
    CenterVelocity center;
    VortexVelocity plus;
    VortexVelocity minus;
};

struct DipoleRate {
    double u_dot{0.0};
    double v_dot{0.0};
    double alpha_dot{0.0};
};

/// Throws InvalidArgument for non-finite fields, ell <= 0, mu == 0 or
/// ell / a > kDipoleMaxRatio. Returns warning text for ell / a above
/// kDipoleWarnRatio, else an empty string.
std::string validate_dipole(const Catenoid& geom, const DipoleState& d);

PlacedPair place_vortices(const Catenoid& geom, const DipoleState& d);

/// Velocities of the two placed vortices due to each other, self terms included.
std::pair<VortexVelocity, VortexVelocity> pair_velocities(const Catenoid& geom, const DipoleState& d);

/// Center velocity from the pair's own advection, closed form in the
/// offsets c = ell cos(alpha) / (a h) and d = ell sin(alpha) / (a h).
CenterVelocity self_propulsion_full(const Catenoid& geom, const DipoleState& d);

/// Leading order in ell: mu sech(v/a) / (2 pi ell) times (sin(alpha)/a, -cos(alpha)).
CenterVelocity self_propulsion_truncated(const Catenoid& geom, const DipoleState& d);

/// (1/ell) e_perp . (x_plus' - x_minus') using the pair's own velocities.
double self_rotation_projected(const Catenoid& geom, const DipoleState& d);

/// Closed form of the same rotation rate.
double self_rotation_closed_form(const Catenoid& geom, const DipoleState& d);

/// First nonvanishing order in ell of the self rotation rate.
double self_rotation_truncated(const Catenoid& geom, const DipoleState& d);

/// (1/ell) (-sin(alpha) A + cos(alpha) B) with A = a (h_+ u_+' - h_- u_-'),
/// B = h_+ v_+' - h_- v_-'.
double frame_rotation(const Catenoid& geom, const DipoleState& d, const PlacedPair& pair, VortexVelocity plus,
                      VortexVelocity minus);

ExternalAdvection external_advection(const Catenoid& geom, std::span<const DipoleState> sys, std::size_t n);

/// Total alpha' of dipole n, including the parallel-transport term
/// tanh(v/a) u' with u' the full center rate.
double orientation_rate(const Catenoid& geom, std::span<const DipoleState> sys, std::size_t n,
                        PropulsionMode mode = PropulsionMode::Full);

std::vector<DipoleRate> dipole_system_rhs(const Catenoid& geom, std::span<const DipoleState> sys,
                                          PropulsionMode mode);

/// The point vortices the dipoles stand for, two per dipole (+ first).
std::vector<Vortex> placed_vortices(const Catenoid& geom, std::span<const DipoleState> sys);

class DipoleSystem {
public:
    /// Validates every dipole; warnings are kept in warnings().
    DipoleSystem(Catenoid geom, std::vector<DipoleState> dipoles, PropulsionMode mode);

    const Catenoid& geometry() const noexcept { return geom_; }
    PropulsionMode mode() const noexcept { return mode_; }
    std::size_t size() const noexcept { return base_.size(); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    std::vector<double> initial_state() const;
    std::vector<DipoleState> dipoles(std::span<const double> y) const;

    void rhs(std::span<const double> y, std::span<double> dydt) const;
    RhsFunction rhs_function() const;

    /// "H" and "J" of the placed vortices; a single dipole also reports the
    /// geodesic invariants "L" (= p_u) and "E" of its center.
    Diagnostics diagnostics() const;

    TrajectoryRecord integrate(double t_final, const IntegratorConfig& config) const;

private:
    Catenoid geom_;
    std::vector<DipoleState> base_;
    PropulsionMode mode_;
    std::vector<std::string> warnings_;
};

}  // namespace catenoid
