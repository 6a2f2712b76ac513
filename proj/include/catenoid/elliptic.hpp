#pragma once

// Incomplete elliptic integral of the first kind in the parameter
// convention,
//
//   F(phi | m) = int_0^phi dtheta / sqrt(1 - m sin^2 theta),
//
// for 0 <= m < 1 and |phi| <= pi/2.

namespace catenoid {

/// Carlson's symmetric integral R_F(x, y, z) by duplication. At most one
/// argument may be zero; all must be non-negative (DomainError otherwise).
double carlson_rf(double x, double y, double z);

/// F(phi | m) = sin(phi) R_F(cos^2 phi, 1 - m sin^2 phi, 1).
/// Throws DomainError outside 0 <= m < 1, |phi| <= pi/2.
double elliptic_f(double phi, double m);

/// Reference value of F(phi | m) by adaptive Gauss-Kronrod quadrature of the
/// defining integral. Shares no code with elliptic_f; used to validate it.
double elliptic_f_oracle(double phi, double m);

}  // namespace catenoid
