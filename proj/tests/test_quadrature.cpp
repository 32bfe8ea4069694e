#include <doctest.h>

#include <cmath>

#include "ptk/cubature.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/rng.hpp"

using namespace ptk::num;

TEST_CASE("gk15 adaptive handles smooth and kinked integrands") {
  auto q = integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846);
  CHECK(q.ok());
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-10));

  // C0 kink
  auto k = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0);
  CHECK(k.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-9));
}

TEST_CASE("half line transform") {
  auto q = integrate_half_line([](double t) { return std::exp(-t); }, 0.0);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-9));
  auto q2 = integrate_half_line([](double t) { return 1.0 / (1.0 + t * t); }, 1.0);
  CHECK(q2.value == doctest::Approx(3.14159265358979 / 4.0).epsilon(1e-8));
}

TEST_CASE("power weighted endpoint singularities") {
  // \int_0^1 s^{-1/2} ds = 2
  auto q = integrate_power_weighted([](double) { return 1.0; }, -0.5, 1.0);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-10));
  // \int_0^2 s^{1.5} e^{-s} ds, oracle by direct fine quadrature
  auto g = [](double s) { return std::exp(-s); };
  auto q2 = integrate_power_weighted(g, 1.5, 2.0);
  auto oracle = integrate([](double s) { return std::pow(s, 1.5) * std::exp(-s); },
                          1e-12, 2.0, {1e-12, 0.0, 8000});
  CHECK(q2.value == doctest::Approx(oracle.value).epsilon(1e-8));
  // gamma <= -1 flags divergence
  auto qd = integrate_power_weighted([](double) { return 1.0; }, -1.0, 1.0);
  CHECK(qd.status == QuadStatus::Divergent);
}

TEST_CASE("cubature volume and smooth integrals") {
  // unit disk area by indicator
  auto f = [](const double* x) { return x[0] * x[0] + x[1] * x[1] < 1.0 ? 1.0 : 0.0; };
  CubOptions o;
  o.rel_tol = 1e-5;
  auto q = integrate_box(f, {-1.0, -1.0}, {1.0, 1.0}, o);
  CHECK(q.value == doctest::Approx(3.14159265358979).epsilon(1e-3));

  auto g = [](const double* x) { return std::exp(-(x[0] + x[1] + x[2])); };
  auto q3 = integrate_box(g, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  const double e1 = 1.0 - std::exp(-1.0);
  CHECK(q3.value == doctest::Approx(e1 * e1 * e1).epsilon(1e-8));
}

TEST_CASE("rng streams are deterministic and splittable") {
  auto a = RngStream::root(42);
  auto b = RngStream::root(42);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  auto c1 = RngStream::root(42).child(1);
  auto c2 = RngStream::root(42).child(2);
  bool differ = false;
  for (int i = 0; i < 8; ++i) differ |= c1.next_u64() != c2.next_u64();
  CHECK(differ);

  // normal moments
  auto s = RngStream::root(7);
  double m1 = 0, m2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
}
