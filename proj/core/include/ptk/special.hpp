#pragma once

#include <cstddef>

namespace ptk::num {

// Volume of the unit d-ball and surface area of the unit (d-1)-sphere.
double unit_ball_volume(int d);
double unit_sphere_area(int d);

double ball_volume(int d, double r);
double sphere_area(int d, double r);

// Fraction of the unit sphere S^{d-1} with first coordinate > c, c in [-1,1].
// d = 1 treats the sphere as the two points {-1, +1}.
double cap_fraction_above(int d, double c);

// Fraction of directions omega with omega_1 in (lo, hi) (clamped to [-1,1]).
double band_fraction(int d, double lo, double hi);

// Fraction of the sphere of radius s centered at distance rho from the
// center of a ball of radius R that lies inside that ball.
double sphere_in_ball_fraction(int d, double rho, double s, double R);

// Fraction of S^{d-1} with omega . n1 > c1 and omega . n2 > c2, where the
// axes n1, n2 subtend the angle psi. Exact for d = 1, 2; 1-d azimuthal
// quadrature for d = 3.
double two_cap_fraction(int d, double c1, double c2, double psi);

// Standard normal upper tail P(Z > z).
double normal_tail(double z);

// First zero of the Bessel function J0.
inline constexpr double bessel_j0_zero1 = 2.404825557695773;

}  // namespace ptk::num
