#include "catenoid/elliptic.hpp"

#include "catenoid/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace catenoid {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

void check_domain(double phi, double m) {
    std::ostringstream os;
    if (!std::isfinite(phi) || !std::isfinite(m)) {
        os << "elliptic_f: non-finite argument (phi=" << phi << ", m=" << m << ")";
        throw DomainError(os.str());
    }
    if (m < 0.0 || m >= 1.0) {
        os << "elliptic_f: parameter m=" << m << " outside [0, 1)";
        throw DomainError(os.str());
    }
    // Allow the rounding slop of callers that compute phi = asin(1).
    if (std::abs(phi) > kHalfPi * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
        os << "elliptic_f: amplitude phi=" << phi << " outside [-pi/2, pi/2]";
        throw DomainError(os.str());
    }
    const double s = std::sin(phi);
    if (m * s * s >= 1.0) {
        os << "elliptic_f: m sin^2(phi) >= 1 (phi=" << phi << ", m=" << m << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

double carlson_rf(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z < 0.0) {
        throw DomainError("carlson_rf: arguments must be non-negative");
    }
    if (x + y == 0.0 || y + z == 0.0 || z + x == 0.0) {
        throw DomainError("carlson_rf: at most one argument may be zero");
    }

    // Truncation error of the fifth-order series is about tol^6 / 4.
    const double tol = std::pow(4.0 * std::numeric_limits<double>::epsilon(), 1.0 / 6.0);
    double mu = (x + y + z) / 3.0;
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
        mu = (x + y + z) / 3.0;
        dx = (mu - x) / mu;
        dy = (mu - y) / mu;
        dz = (mu - z) / mu;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < tol) {
            break;
        }
        const double sx = std::sqrt(x);
        const double sy = std::sqrt(y);
        const double sz = std::sqrt(z);
        const double lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 + e2 * (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) + e3 / 14.0) / std::sqrt(mu);
}

double elliptic_f(double phi, double m) {
    check_domain(phi, m);
    if (phi == 0.0) {
        return phi;
    }
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
}

double elliptic_f_oracle(double phi, double m) {
    check_domain(phi, m);
    if (phi == 0.0) {
        return 0.0;
    }
    auto integrand = [m](double theta) {
        const double s = std::sin(theta);
        return 1.0 / std::sqrt(1.0 - m * s * s);
    };
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double lo = std::min(0.0, phi);
    const double hi = std::max(0.0, phi);
    // Kronrod error estimates are pessimistic: 1e-13 requested gives ~1e-15 actual.
    const double value = Quadrature::integrate(integrand, lo, hi, 15, 1e-13);
    return phi < 0.0 ? -value : value;
}

}  // namespace catenoid
