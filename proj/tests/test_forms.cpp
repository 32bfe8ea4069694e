#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "ptk/forms.hpp"
#include "ptk/kernels.hpp"
#include "ptk/quadrature.hpp"

using namespace ptk;
using namespace ptk::forms;
using geometry::Domain;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd sample_fn(const Grid& g, double (*f)(const std::vector<double>&)) {
  Eigen::VectorXd u(g.nodes.size());
  for (size_t i = 0; i < g.nodes.size(); ++i) u[i] = f(g.nodes[i]);
  return u;
}

double sin_pi(const std::vector<double>& x) { return std::sin(kPi * x[0]); }

}  // namespace

TEST_CASE("local assembly energies on the interval") {
  auto form = assemble_local(Domain::box({0.0}, {1.0}), 1.0 / 256);
  const auto u = sample_fn(form.grid, sin_pi);
  // E(sin, sin) -> pi^2/4 for the 1/2-gradient form
  CHECK(form.energy(u) == doctest::Approx(kPi * kPi / 4.0).epsilon(0.01));

  Eigen::VectorXd zero = Eigen::VectorXd::Zero(u.size());
  CHECK(form.energy(zero) == 0.0);

  // hat at one interior node: energy = 1/h
  Eigen::VectorXd hat = zero;
  hat[u.size() / 2] = 1.0;
  CHECK(form.energy(hat) == doctest::Approx(256.0).epsilon(1e-12));

  // mass weights reproduce the volume
  CHECK(form.mass_total() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("grid weights follow curved boundaries") {
  auto form = assemble_local(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 64);
  CHECK(form.mass_total() == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("energy is symmetric positive semidefinite") {
  auto form = assemble_local(Domain::box({0.0, 0.0}, {1.0, 1.0}), 1.0 / 16);
  auto rng = num::RngStream::root(11);
  const int n = static_cast<int>(form.grid.nodes.size());
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = rng.normal();
      v[i] = rng.normal();
    }
    CHECK(form.energy(u) >= -1e-12 * u.squaredNorm());
    const double a = u.dot(form.stiffness * v);
    const double b = v.dot(form.stiffness * u);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("markovian contraction under unit truncation") {
  auto local = assemble_local(Domain::box({0.0}, {1.0}), 1.0 / 64);
  NonlocalOptions nlo;
  nlo.truncation_radius = 40.0;
  auto nonlocal = assemble_nonlocal(1.0, 0.5, Domain::box({0.0}, {1.0}), 1.0 / 32, {}, nlo);
  auto rng = num::RngStream::root(5);
  for (const auto* form : {&local, &nonlocal}) {
    const int n = static_cast<int>(form->grid.nodes.size());
    for (int rep = 0; rep < 40; ++rep) {
      Eigen::VectorXd u(n);
      for (int i = 0; i < n; ++i) u[i] = 2.0 * rng.normal();
      const double k = 1.0;
      Eigen::VectorXd trunc = u;
      for (int i = 0; i < n; ++i) trunc[i] = std::clamp(u[i], -k, k);
      CHECK(form->energy(trunc) <= form->energy(u) * (1.0 + 1e-12) + 1e-14);
    }
  }
}

TEST_CASE("nonlocal two-point sanity and tempering monotonicity") {
  // two interior nodes; midpoint weights make the energy J(x1,x2) w1 w2
  const double h = 0.5;
  NonlocalOptions opts;
  opts.exact_offsets = 0;
  opts.truncation_radius = 100.0;
  auto form = assemble_nonlocal(1.0, 0.0, Domain::box({0.0}, {3.0 * h}), h, {}, opts);
  REQUIRE(form.grid.nodes.size() == 2);
  Eigen::VectorXd u(2);
  u << 1.0, 0.0;
  const double r = std::abs(form.grid.nodes[0][0] - form.grid.nodes[1][0]);
  const double expect = kernels::jump_kernel(1.0, 0.0, 1, r) * h * h;
  CHECK(form.energy(u) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(form.energy(Eigen::VectorXd::Zero(2)) == 0.0);

  // dipole at distance 10: energy decreases in the mass parameter
  double prev = 1e300;
  for (double m : {0.25, 0.5, 1.0, 2.0}) {
    NonlocalOptions o2;
    o2.exact_offsets = 0;
    o2.truncation_radius = 60.0;
    auto f2 = assemble_nonlocal(1.0, m, Domain::box({0.0}, {12.0}), 1.0, {}, o2);
    const int n = static_cast<int>(f2.grid.nodes.size());
    Eigen::VectorXd dip = Eigen::VectorXd::Zero(n);
    int i0 = -1, i1 = -1;
    for (int i = 0; i < n; ++i) {
      if (std::abs(f2.grid.nodes[i][0] - 1.0) < 1e-9) i0 = i;
      if (std::abs(f2.grid.nodes[i][0] - 11.0) < 1e-9) i1 = i;
    }
    REQUIRE(i0 >= 0);
    REQUIRE(i1 >= 0);
    dip[i0] = 1.0;
    dip[i1] = -1.0;
    // isolate the cross coupling: E(dip) - E(e0) - E(e1) = 2 W_{01} (u0-u1)^2 part
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n), e1 = e0;
    e0[i0] = 1.0;
    e1[i1] = 1.0;
    const double cross = form.energy(u) * 0.0 +
                         (f2.energy(dip) - f2.energy(e0) - f2.energy(e1));
    CHECK(cross < prev);
    prev = cross;
  }

  // too small a truncation radius is rejected
  NonlocalOptions bad;
  bad.truncation_radius = 0.6;
  CHECK_THROWS_AS(
      (void)assemble_nonlocal(0.5, 0.0, Domain::box({0.0}, {1.0}), 1.0 / 16, {}, bad),
      std::invalid_argument);
}

TEST_CASE("stollmann-voigt margins") {
  auto form = assemble_local(Domain::box({0.0}, {1.0}), 1.0 / 256);

  // sin(pi x) with the exact continuum potential norm sup x(1-x) = 1/4
  const auto u = sample_fn(form.grid, sin_pi);
  auto rep = stollmann_voigt_check(form, 1.0, {u}, 0.25);
  CHECK(rep.min_margin ==
        doctest::Approx(kPi * kPi / 16.0 - 0.5).epsilon(0.02));

  // 200 random Dirichlet functions against the discrete Green norm
  auto rng = num::RngStream::root(99);
  std::vector<Eigen::VectorXd> us;
  const int n = static_cast<int>(form.grid.nodes.size());
  for (int rep2 = 0; rep2 < 100; ++rep2) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    us.push_back(v);
  }
  for (double p : {1.0, 2.0}) {
    auto r = stollmann_voigt_check(form, p, us);
    CHECK(r.min_margin >= -1e-8);
  }
}

TEST_CASE("tightness diagnostic") {
  auto form = assemble_local(Domain::box({0.0}, {1.0}), 1.0 / 64);

  // M = 0 pins u = 0
  auto zero = tightness_diagnostic(form, 1.0, 0.0, {0.1, 1.0, 10.0});
  CHECK(zero.verdict == Verdict::In);
  for (double v : zero.sup_tail) CHECK(v == 0.0);

  // bounded interval: the tail dies along the level ladder
  auto rep = tightness_diagnostic(form, 1.0, 4.0, {0.25, 0.5, 1.0, 2.0, 4.0});
  CHECK(rep.verdict == Verdict::In);
  CHECK(rep.sup_tail.back() == 0.0);

  // strip truncations: the tail at a fixed level does not decay with length
  std::vector<double> lengths{6.0, 12.0, 24.0};
  std::vector<double> tails;
  for (double L : lengths) {
    Truncation tr;
    tr.lo = {-0.5 * L, -1.0};
    tr.hi = {0.5 * L, 1.0};
    auto sf = assemble_local(Domain::strip(2, 1.0), 0.1, tr);
    auto tr2 = tightness_diagnostic(sf, 1.0, 4.0, {0.5});
    tails.push_back(tr2.sup_tail[0]);
  }
  CHECK(tails[0] > 0.0);
  CHECK(tails.back() >= 0.7 * tails.front());
}

TEST_CASE("semigroup energy bound surrogate") {
  auto form = assemble_local(Domain::box({0.0}, {1.0}), 1.0 / 64);
  const int n = static_cast<int>(form.grid.nodes.size());
  Eigen::MatrixXd A = Eigen::MatrixXd(form.stiffness);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = form.grid.weights[i];
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::MatrixXd(w.asDiagonal()));
  auto rng = num::RngStream::root(2);
  for (double t : {0.1, 1.0}) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd u(n);
      for (int i = 0; i < n; ++i) u[i] = rng.normal();
      // coefficients in the M-orthonormal eigenbasis
      Eigen::VectorXd c = es.eigenvectors().transpose() * (w.asDiagonal() * u);
      double energy_pt = 0.0, mass = 0.0;
      for (int k = 0; k < n; ++k) {
        energy_pt += es.eigenvalues()[k] * std::exp(-2.0 * es.eigenvalues()[k] * t) *
                     c[k] * c[k];
        mass += c[k] * c[k];
      }
      CHECK(energy_pt <= (1.05 / (2.0 * std::exp(1.0) * t)) * mass);
    }
  }
}

TEST_CASE("form dump is parseable text") {
  auto form = assemble_local(Domain::box({0.0}, {1.0}), 0.1);
  std::ostringstream os;
  form.dump(os);
  const std::string text = os.str();
  CHECK(text.find("ptk-form v1") == 0);
  CHECK(text.find("stiffness") != std::string::npos);
}
