#pragma once

// Intrinsic geometry of the catenoid
//
//   X(v,u) = (a cosh(v/a) cos u, a cosh(v/a) sin u, v),
//   g = cosh^2(v/a) (dv^2 + a^2 du^2),
//
// parameterized by the throat radius a. Every quantity the vortex and
// geodesic code needs is a pure function of a and the point coordinates.

#include <cmath>

namespace catenoid {

/// Cutoff on the pair kernel below which two vortices count as coincident.
inline constexpr double kCollisionEpsilon = 1e-12;

/// A point on the surface. u is the azimuth (radians, kept unwrapped), v the
/// axial coordinate.
struct SurfacePoint {
    double u{0.0};
    double v{0.0};

    friend bool operator==(const SurfacePoint&, const SurfacePoint&) = default;
};

struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};
};

/// The three nonvanishing Christoffel symbols of the (u, v) chart.
struct ChristoffelSymbols {
    double v_vv{0.0};
    double v_uu{0.0};
    double u_uv{0.0};
};

class Catenoid {
public:
    /// Throws InvalidArgument unless throat_radius is finite and > 0.
    explicit Catenoid(double throat_radius);

    double throat_radius() const noexcept { return a_; }

    /// h(v) = cosh(v/a).
    double metric_factor(double v) const noexcept { return std::cosh(v / a_); }

    /// a h^2(v): the area element dA = a h^2 dv du, which is also the
    /// per-vortex symplectic weight (times the circulation).
    double area_weight(double v) const noexcept;

    /// F(p,q) = cosh((v_p - v_q)/a) - cos(u_p - u_q), evaluated in the
    /// cancellation-free form 2 sinh^2(dv/2a) + 2 sin^2(du/2).
    double pair_kernel(SurfacePoint p, SurfacePoint q) const noexcept;

    /// G(p,q) = log(F(p,q)) / 4pi. Throws CoincidentVortices when
    /// F < kCollisionEpsilon.
    double greens_function(SurfacePoint p, SurfacePoint q) const;

    /// S(v) = (a/2) v + (a^2/4) sinh(2v/a), the momentum-map potential with
    /// S'(v) = a cosh^2(v/a).
    double momentum_potential(double v) const noexcept;

    ChristoffelSymbols christoffel(double v) const noexcept;

    /// Rotation rate tanh(v/a) * u_dot of a parallel-transported tangent
    /// vector relative to the orthonormal (e_u, e_v) frame.
    double transport_rotation_rate(double v, double u_dot) const noexcept;

    Vec3 embed(SurfacePoint p) const noexcept;

    /// Euclidean distance between the embedded images of p and q.
    double chordal_distance(SurfacePoint p, SurfacePoint q) const noexcept;

private:
    double a_;
};

}  // namespace catenoid
