#include <doctest.h>

#include <cmath>

#include "ptk/measure.hpp"

using namespace ptk;
using namespace ptk::geometry;

namespace {
constexpr double kPi = 3.14159265358979323846;

// 2-d Riemann oracle for horn cap ball masses
double horn_slab_mass_oracle(double x1, double r) {
  const double w = std::exp(-(x1 - r));
  const int nx = 4000, ny = 400;
  double sum = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double s = x1 - r + 2.0 * r * (i + 0.5) / nx;
    for (int j = 0; j < ny; ++j) {
      const double y = -w + 2.0 * w * (j + 0.5) / ny;
      const bool in_horn = s > 0.0 && std::abs(y) < std::exp(-s);
      const bool in_ball = (s - x1) * (s - x1) + y * y < r * r;
      if (in_horn && in_ball) sum += (2.0 * r / nx) * (2.0 * w / ny);
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("membership follows the open-set convention") {
  auto ball = Domain::ball({0, 0, 0}, 1.0);
  CHECK(ball.contains({0.5, 0.0, 0.0}));
  CHECK_FALSE(ball.contains({1.0, 0.0, 0.0}));  // boundary excluded

  auto strip = Domain::strip(2, 1.0);
  CHECK_FALSE(strip.contains({100.0, 0.5}));  // half-width boundary excluded
  CHECK(strip.contains({100.0, 0.4999}));

  auto horn = Domain::horn(2, HornProfile{HornProfile::Family::Exp, 1.0});
  CHECK(horn.contains({2.0, 0.1}));  // 0.1 < e^{-2} ~ 0.1353
  CHECK_FALSE(horn.contains({2.0, 0.14}));

  CHECK_THROWS_AS((void)ball.contains({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("domain metadata") {
  auto ball = Domain::ball({1, 0}, 2.0);
  CHECK(ball.bounded());
  CHECK(ball.circumradius() == doctest::Approx(3.0));
  CHECK_FALSE(Domain::strip(2, 1.0).bounded());
  CHECK(Domain::box({0, 0}, {1, 1}).volume() == doctest::Approx(1.0));
  // horn volume = int_0^inf 2 e^{-x} dx = 2
  auto horn = Domain::horn(2, HornProfile{HornProfile::Family::Exp, 1.0});
  CHECK(horn.volume() == doctest::Approx(2.0).epsilon(1e-6));
  auto uni = Domain::union_of({Domain::ball({0, 0}, 1.0), Domain::ball({3, 0}, 1.0)});
  CHECK(uni.bounded());
  CHECK(uni.contains({3.2, 0.0}));
}

TEST_CASE("ball_mass catalogued examples") {
  // Lebesgue on R^2: area of the unit disk
  auto leb2 = MeasureSpec::lebesgue(Domain::full_space(2));
  CHECK(ball_mass(leb2, {5.0, -3.0}, 1.0).value == doctest::Approx(kPi).epsilon(1e-10));

  // whole sphere enclosed
  auto sigma = MeasureSpec::sphere_surface({0, 0, 0}, 1.0);
  CHECK(ball_mass(sigma, {0, 0, 0}, 2.0).value ==
        doctest::Approx(4.0 * kPi).epsilon(1e-10));
  // spherical cap from an on-axis point
  const double cap = ball_mass(sigma, {1.0, 0, 0}, 1.0).value;
  // chord |y - e1| < 1 means theta < pi/3: area = 2 pi (1 - cos(pi/3)) = pi
  CHECK(cap == doctest::Approx(kPi).epsilon(1e-9));

  // horn slab: oracle by 2-d Riemann sum
  auto horn = Domain::horn(2, HornProfile{HornProfile::Family::Exp, 1.0});
  auto muh = MeasureSpec::lebesgue(horn);
  const double got = ball_mass(muh, {10.0, 0.0}, 1.0).value;
  const double oracle = horn_slab_mass_oracle(10.0, 1.0);
  CHECK(got == doctest::Approx(oracle).epsilon(0.02));
  // envelope: below int_9^11 2 e^{-s} ds
  CHECK(got <= 2.0 * (std::exp(-9.0) - std::exp(-11.0)) * 1.02);

  // monotone in r
  double prev = 0.0;
  for (double r : {0.25, 0.5, 1.0, 2.0}) {
    const double v = ball_mass(muh, {1.0, 0.0}, r).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }

  // atoms
  auto at = MeasureSpec::atoms({{0.0}, {1.0}}, {2.0, 3.0});
  CHECK(ball_mass(at, {0.0}, 0.5).value == doctest::Approx(2.0));
  CHECK(ball_mass(at, {0.5}, 0.6).value == doctest::Approx(5.0));
}

TEST_CASE("integrate catalogued examples") {
  // Lebesgue on (0,1), f = 1
  auto mu1 = MeasureSpec::lebesgue(Domain::box({0.0}, {1.0}));
  Integrand one;
  one.f = [](const double*) { return 1.0; };
  CHECK(integrate(mu1, one, Region::all()).value == doctest::Approx(1.0).epsilon(1e-9));

  // |y|^{-1} over the unit ball in d=3, polar oracle 2 pi
  auto mu3 = MeasureSpec::lebesgue(Domain::ball({0, 0, 0}, 1.0));
  Integrand f;
  f.f = [](const double* y) {
    return 1.0 / std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
  };
  f.singular_point = std::vector<double>{0, 0, 0};
  f.singular_order = 1.0;
  CHECK(integrate(mu3, f, Region::all()).value ==
        doctest::Approx(2.0 * kPi).epsilon(1e-6));

  // atoms weighted sum
  auto at = MeasureSpec::atoms({{0.0}, {1.0}}, {2.0, 3.0});
  Integrand idf;
  idf.f = [](const double* y) { return y[0]; };
  CHECK(integrate(at, idf, Region::all()).value == doctest::Approx(3.0));

  // additivity over mixtures
  auto mix = MeasureSpec::mixture({0.5, 2.0}, {mu1, at});
  const double lhs = integrate(mix, idf, Region::all()).value;
  const double rhs = 0.5 * integrate(mu1, idf, Region::all()).value +
                     2.0 * integrate(at, idf, Region::all()).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("sampling consistency") {
  auto stream = num::RngStream::root(2024);

  // single atom: n copies
  auto at = MeasureSpec::atoms({{0.0}}, {1.0});
  auto pts = sample(at, 5, stream);
  REQUIRE(pts.size() == 5);
  for (const auto& wp : pts) CHECK(wp.point[0] == 0.0);

  // sphere surface: normalized mean of f = 1
  auto sigma = MeasureSpec::sphere_surface({0, 0, 0}, 1.0);
  auto sp = sample(sigma, 64, stream);
  for (const auto& wp : sp)
    CHECK(std::sqrt(wp.point[0] * wp.point[0] + wp.point[1] * wp.point[1] +
                    wp.point[2] * wp.point[2]) == doctest::Approx(1.0).epsilon(1e-12));

  // Lebesgue on (0,1): E y = 1/2 within 4 standard errors (exact moment)
  auto mu1 = MeasureSpec::lebesgue(Domain::box({0.0}, {1.0}));
  const long n = 200000;
  auto ps = sample(mu1, n, stream);
  double mean = 0.0, m2 = 0.0;
  for (const auto& wp : ps) {
    mean += wp.point[0];
    m2 += wp.point[0] * wp.point[0];
  }
  mean /= n;
  m2 /= n;
  const double se = std::sqrt((m2 - mean * mean) / n);
  CHECK(std::abs(mean - 0.5) < 4.0 * se);

  // infinite mass without envelope is rejected
  auto lebfull = MeasureSpec::lebesgue(Domain::full_space(2));
  CHECK_THROWS_AS((void)sample(lebfull, 1, stream), std::invalid_argument);
}

TEST_CASE("b0 profiles separate horn, strip, full space") {
  // bounded short-circuit
  auto prof_ball = b0_profile(Domain::ball({0, 0}, 1.0), {10, 20, 40});
  CHECK(prof_ball.verdict == Verdict::In);

  auto prof_strip = b0_profile(Domain::strip(2, 1.0), {10, 20, 40});
  CHECK(prof_strip.verdict == Verdict::Out);
  // slab cap disk oracle: area = sqrt(3)/2 + pi/3
  const double oracle = std::sqrt(3.0) / 2.0 + kPi / 3.0;
  for (double v : prof_strip.values) CHECK(v == doctest::Approx(oracle).epsilon(5e-3));

  auto prof_horn =
      b0_profile(Domain::horn(2, HornProfile{HornProfile::Family::Exp, 1.0}), {10, 20, 40});
  CHECK(prof_horn.verdict == Verdict::In);
  for (size_t i = 0; i < prof_horn.values.size(); ++i)
    CHECK(prof_horn.values[i] <= 2.0 * std::exp(-(prof_horn.abscissae[i] - 1.0)));

  auto prof_full = b0_profile(Domain::full_space(2), {10, 20, 40});
  CHECK(prof_full.verdict == Verdict::Out);
  for (double v : prof_full.values) CHECK(v == doctest::Approx(kPi).epsilon(1e-8));
}
