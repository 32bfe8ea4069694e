#include "ptk/special.hpp"

#include <algorithm>
#include <cmath>

#include "ptk/quadrature.hpp"

namespace ptk::num {

namespace {
constexpr double kPi = 3.14159265358979323846;

// \int_0^theta sin^{d-2} t dt, exact enough via GK; cached denominators.
double sin_power_integral(int d, double theta) {
  if (theta <= 0.0) return 0.0;
  if (d == 2) return theta;  // sin^0
  if (d == 3) return 1.0 - std::cos(theta);
  auto f = [d](double t) { return std::pow(std::sin(t), d - 2); };
  QuadOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-15;
  return integrate(f, 0.0, theta, o).value;
}
}  // namespace

double unit_ball_volume(int d) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double unit_sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d, double r) { return unit_ball_volume(d) * std::pow(r, d); }

double sphere_area(int d, double r) { return unit_sphere_area(d) * std::pow(r, d - 1); }

double cap_fraction_above(int d, double c) {
  if (c <= -1.0) return 1.0;
  if (c >= 1.0) return 0.0;
  if (d == 1) return c < -1.0 ? 1.0 : (c < 1.0 ? 0.5 : 0.0);
  const double theta = std::acos(c);  // polar angle of the cap boundary
  return sin_power_integral(d, theta) / sin_power_integral(d, kPi);
}

double band_fraction(int d, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (d == 1) {
    // S^0 is the two points {-1, +1}, weight 1/2 each
    return ((lo < -1.0 && hi > -1.0) ? 0.5 : 0.0) + ((lo < 1.0 && hi > 1.0) ? 0.5 : 0.0);
  }
  lo = std::max(lo, -1.0);
  hi = std::min(hi, 1.0);
  if (hi <= lo) return 0.0;
  return cap_fraction_above(d, lo) - cap_fraction_above(d, hi);
}

double sphere_in_ball_fraction(int d, double rho, double s, double R) {
  if (s <= 0.0) return rho < R ? 1.0 : 0.0;
  // distances from the ball center along the probe sphere span [|rho-s|, rho+s]
  if (rho + s <= R) return 1.0;
  if (std::abs(rho - s) >= R) return 0.0;
  if (rho < 1e-300) return s < R ? 1.0 : 0.0;
  const double c = (rho * rho + s * s - R * R) / (2.0 * rho * s);
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return 1.0;
  if (d == 1) return 0.5;  // exactly one of the two directions lands inside
  return cap_fraction_above(d, c);
}

namespace {

// angle intervals on the circle: measure of {phi : |phi - center| <= half}
// intersected over two caps, all mod 2*pi
double arc_intersection(double h1, double psi, double h2) {
  // cap1 = [-h1, h1], cap2 = [psi - h2, psi + h2] with psi in [0, pi]
  auto overlap = [](double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
  };
  // unwrap cap2 into the three adjacent periods
  double total = 0.0;
  for (int k = -1; k <= 1; ++k)
    total += overlap(-h1, h1, psi - h2 + 2.0 * kPi * k, psi + h2 + 2.0 * kPi * k);
  return std::min(total, 2.0 * std::min(h1, h2));
}

}  // namespace

double two_cap_fraction(int d, double c1, double c2, double psi) {
  if (c1 >= 1.0 || c2 >= 1.0) return 0.0;
  if (c1 <= -1.0) return cap_fraction_above(d, c2);
  if (c2 <= -1.0) return cap_fraction_above(d, c1);
  psi = std::clamp(psi, 0.0, kPi);
  if (d == 1) {
    // directions are +-n with n1 = n2 (psi ~ 0) or n1 = -n2 (psi ~ pi)
    const bool same = psi < 0.5 * kPi;
    double f = 0.0;
    // omega = n1
    if (1.0 > c1 && (same ? 1.0 : -1.0) > c2) f += 0.5;
    if (-1.0 > c1 && (same ? -1.0 : 1.0) > c2) f += 0.5;
    return f;
  }
  if (d == 2) {
    const double h1 = std::acos(c1);
    const double h2 = std::acos(c2);
    return arc_intersection(h1, psi, h2) / (2.0 * kPi);
  }
  // d = 3: integrate the polar-angle measure over the azimuth around n1.
  // omega.n2 = cos psi cos th + sin psi sin th cos phi
  const double th1 = std::acos(c1);
  auto f = [&](double phi) {
    const double A = std::hypot(std::cos(psi), std::sin(psi) * std::cos(phi));
    double lo = 0.0, hi = th1;
    if (A < 1e-300) {
      if (c2 >= 0.0) return 0.0;
      // condition 2 holds for every theta
    } else {
      const double delta = std::atan2(std::sin(psi) * std::cos(phi), std::cos(psi));
      const double ratio = c2 / A;
      if (ratio >= 1.0) return 0.0;
      if (ratio > -1.0) {
        const double w = std::acos(ratio);
        lo = std::max(lo, delta - w);
        hi = std::min(hi, delta + w);
      }
      // ratio <= -1: condition 2 holds everywhere
    }
    if (hi <= lo) return 0.0;
    return std::cos(lo) - std::cos(hi);
  };
  QuadOptions o;
  o.rel_tol = 1e-9;
  o.abs_tol = 1e-14;
  const double integral = integrate(f, 0.0, kPi, o).value;  // symmetric in phi
  return integral * 2.0 / (4.0 * kPi);
}

double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace ptk::num
