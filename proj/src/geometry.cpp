#include "catenoid/geometry.hpp"

#include "catenoid/errors.hpp"

#include <numbers>
#include <sstream>

namespace catenoid {

namespace {

std::string coincidence_message(int first, int second, double kernel) {
    std::ostringstream os;
    os.precision(6);
    os << "coincident vortices";
    if (first >= 0 && second >= 0) {
        os << " (" << first << ", " << second << ")";
    }
    os << ": pair kernel " << kernel << " below cutoff " << kCollisionEpsilon;
    return os.str();
}

}  // namespace

CoincidentVortices::CoincidentVortices(int first, int second, double kernel)
    : Error(coincidence_message(first, second, kernel)),
      first_(first),
      second_(second),
      kernel_(kernel) {}

Catenoid::Catenoid(double throat_radius) : a_(throat_radius) {
    if (!(throat_radius > 0.0) || !std::isfinite(throat_radius)) {
        std::ostringstream os;
        os << "throat radius must be finite and positive, got " << throat_radius;
        throw InvalidArgument(os.str());
    }
}

double Catenoid::area_weight(double v) const noexcept {
    const double h = metric_factor(v);
    return a_ * h * h;
}

double Catenoid::pair_kernel(SurfacePoint p, SurfacePoint q) const noexcept {
    const double sh = std::sinh(0.5 * (p.v - q.v) / a_);
    const double sn = std::sin(0.5 * (p.u - q.u));
    return 2.0 * (sh * sh + sn * sn);
}

double Catenoid::greens_function(SurfacePoint p, SurfacePoint q) const {
    const double f = pair_kernel(p, q);
    if (f < kCollisionEpsilon) {
        throw CoincidentVortices(-1, -1, f);
    }
    return std::log(f) / (4.0 * std::numbers::pi);
}

double Catenoid::momentum_potential(double v) const noexcept {
    return 0.5 * a_ * v + 0.25 * a_ * a_ * std::sinh(2.0 * v / a_);
}

ChristoffelSymbols Catenoid::christoffel(double v) const noexcept {
    const double t = std::tanh(v / a_);
    return {t / a_, -a_ * t, t / a_};
}

double Catenoid::transport_rotation_rate(double v, double u_dot) const noexcept {
    return std::tanh(v / a_) * u_dot;
}

Vec3 Catenoid::embed(SurfacePoint p) const noexcept {
    const double r = a_ * std::cosh(p.v / a_);
    return {r * std::cos(p.u), r * std::sin(p.u), p.v};
}

double Catenoid::chordal_distance(SurfacePoint p, SurfacePoint q) const noexcept {
    const Vec3 x = embed(p);
    const Vec3 y = embed(q);
    return std::hypot(x.x - y.x, x.y - y.y, x.z - y.z);
}

}  // namespace catenoid
