#pragma once

// Geodesics of the catenoid. With p_u = a^2 h^2 u' (Clairaut) and
// 2E = h^2 (v'^2 + a^2 u'^2) conserved, every geodesic is labelled by
// Lambda = p_u / (a sqrt(2E)) and its orbit obeys
//
//   du/dv = +- Lambda / (a sqrt(cosh^2(v/a) - Lambda^2)).

#include "catenoid/geometry.hpp"
#include "catenoid/integrator.hpp"

#include <optional>
#include <span>

namespace catenoid {

enum class Regime { Meridional, Subcritical, Critical, Supercritical };

const char* to_string(Regime r) noexcept;

/// Band around Lambda = 0 and |Lambda| = 1 inside which the regime is
/// Meridional or Critical.
inline constexpr double kRegimeTolerance = 1e-9;

/// Within this distance of the turning point the supercritical orbit is
/// evaluated by its square-root series.
inline constexpr double kTurningSeriesBand = 1e-8;

struct GeodesicState {
    double u{0.0};
    double v{0.0};
    double u_dot{0.0};
    double v_dot{0.0};

    friend bool operator==(const GeodesicState&, const GeodesicState&) = default;
};

struct GeodesicSpec {
    double p_u{0.0};
    double energy{0.0};
    double lambda{0.0};
    Regime regime{Regime::Meridional};
    std::optional<double> v_turn;  // supercritical only
    int sign{1};                   // branch of the orbit equation, sgn(v')
};

Regime regime_of(double lambda) noexcept;

/// Conserved quantities and regime of the geodesic through state.
/// Throws DegenerateVelocity when 2E <= 0.
GeodesicSpec classify(const Catenoid& geom, const GeodesicState& state);

/// Spec with unit 2E for a given Lambda (p_u = a Lambda).
GeodesicSpec spec_from_lambda(const Catenoid& geom, double lambda, int sign = 1);

/// u(v) on the spec's branch, measured from u0 at v = 0 (Subcritical) or at
/// the turning point (Supercritical). Throws WrongRegime for Meridional and
/// Critical specs, OutsideDomain for |v| < v_turn - kTurningSeriesBand.
double orbit_u_of_v(const GeodesicSpec& spec, const Catenoid& geom, double v, double u0);

/// du/dv from the orbit equation on the spec's branch.
double orbit_slope(const GeodesicSpec& spec, const Catenoid& geom, double v);

/// p_u and E of a state.
double azimuthal_momentum(const Catenoid& geom, const GeodesicState& s);
double geodesic_energy(const Catenoid& geom, const GeodesicState& s);

/// y' of the geodesic equations on the flat state [u, v, u', v'].
void geodesic_rhs(const Catenoid& geom, std::span<const double> y, std::span<double> dydt);

/// Integrates the geodesic equations with rel_tol = abs_tol = tol. The
/// record carries diagnostics "p_u" and "E".
TrajectoryRecord integrate_geodesic(const Catenoid& geom, const GeodesicState& state0, double t_final,
                                    double tol);
TrajectoryRecord integrate_geodesic(const Catenoid& geom, const GeodesicState& state0, double t_final,
                                    const IntegratorConfig& config);

/// Lambda of the geodesic a tight dipole follows, from the mean position
/// and mean velocity of its pair.
double lambda_from_dipole(const Catenoid& geom, const GeodesicState& mean_state);

/// A point of a traced path plus the sign of its v-velocity, which picks the
/// orbit branch.
struct OrbitSample {
    double u{0.0};
    double v{0.0};
    double v_dot{0.0};
};

struct OrbitComparison {
    double max_deviation{0.0};
    std::size_t compared{0};
    std::size_t excluded{0};
};

/// Distance of a path from the geodesic described by spec, in orbit form.
///  Meridional:    max |u - u_first|
///  Critical:      max |v|
///  otherwise:     max |u - u_geodesic(v)|, the geodesic anchored at the
///                 first sample clear of the turning point and stitched across
///                 turning points by sgn(v').
/// Supercritical samples with |v| - v_turn < turn_exclusion are skipped, since
/// du/dv is singular there.
OrbitComparison orbit_deviation(const Catenoid& geom, const GeodesicSpec& spec, std::span<const OrbitSample> path,
                                double turn_exclusion);

}  // namespace catenoid
