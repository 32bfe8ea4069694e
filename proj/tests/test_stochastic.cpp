#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ptk/special.hpp"
#include "ptk/stochastic.hpp"

using namespace ptk;
using namespace ptk::stochastic;
using kernels::ProcessSpec;

namespace {
constexpr double kPi = 3.14159265358979323846;

double ks_distance_cauchy(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  const double n = static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const double F = 0.5 + std::atan(xs[i]) / kPi;
    ks = std::max(ks, std::abs(F - (i + 1) / n));
    ks = std::max(ks, std::abs(F - i / n));
  }
  return ks;
}

}  // namespace

TEST_CASE("brownian increments have the dt covariance") {
  auto stream = num::RngStream::root(31);
  auto spec = ProcessSpec::brownian(2);
  const int n = 200000;
  double s11 = 0, s22 = 0, s12 = 0;
  for (int i = 0; i < n; ++i) {
    auto dx = sample_increment(spec, 1.0, stream);
    s11 += dx[0] * dx[0];
    s22 += dx[1] * dx[1];
    s12 += dx[0] * dx[1];
  }
  const double se = 3.0 * std::sqrt(2.0 / n);
  CHECK(std::abs(s11 / n - 1.0) < se);
  CHECK(std::abs(s22 / n - 1.0) < se);
  CHECK(std::abs(s12 / n) < se);
}

TEST_CASE("stable alpha=1 increments are Cauchy") {
  auto stream = num::RngStream::root(77);
  auto spec = ProcessSpec::stable(1.0, 1);
  std::vector<double> xs(200000);
  for (auto& v : xs) v = sample_increment(spec, 1.0, stream)[0];
  CHECK(ks_distance_cauchy(xs) < 0.01);
}

TEST_CASE("positive stable subordinator matches its Laplace transform") {
  auto stream = num::RngStream::root(13);
  const double rho = 0.5, dt = 0.7;
  const long n = 200000;
  for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
    double sum = 0, sum2 = 0;
    for (long i = 0; i < n; ++i) {
      const double S = std::pow(dt, 1.0 / rho) * sample_positive_stable(rho, stream);
      const double w = std::exp(-lambda * S);
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double target = std::exp(-dt * std::pow(lambda, rho));
    CHECK(std::abs(mean - target) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("tempered subordinator matches its Laplace transform") {
  auto stream = num::RngStream::root(17);
  const double rho = 0.5, theta = 1.0, dt = 0.5;  // alpha = 1, m = 1
  const long n = 200000;
  for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
    double sum = 0, sum2 = 0;
    for (long i = 0; i < n; ++i) {
      const double T = sample_tempered_subordinator(rho, theta, dt, stream);
      const double w = std::exp(-lambda * T);
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double target =
        std::exp(-dt * (std::pow(lambda + theta, rho) - std::pow(theta, rho)));
    CHECK(std::abs(mean - target) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("relativistic characteristic function") {
  auto stream = num::RngStream::root(23);
  auto spec = ProcessSpec::relativistic(1.0, 1.0, 1);
  const long n = 200000;
  for (double xi : {0.5, 1.0, 2.0}) {
    double sum = 0, sum2 = 0;
    for (long i = 0; i < n; ++i) {
      const double w = std::cos(xi * sample_increment(spec, 1.0, stream)[0]);
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double target = std::exp(-(std::sqrt(xi * xi + 1.0) - 1.0));
    CHECK(std::abs(mean - target) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("semigroup property of MC marginals") {
  // X_{s+t} in one step vs two stages, KS distance on the empirical laws
  for (const auto& spec : {ProcessSpec::brownian(1), ProcessSpec::stable(1.0, 1),
                           ProcessSpec::relativistic(1.0, 1.0, 1)}) {
    auto s1 = num::RngStream::root(301);
    auto s2 = num::RngStream::root(907);
    const long n = 100000;
    std::vector<double> one(n), two(n);
    for (long i = 0; i < n; ++i) {
      one[i] = sample_increment(spec, 1.0, s1)[0];
      two[i] = sample_increment(spec, 0.4, s2)[0] + sample_increment(spec, 0.6, s2)[0];
    }
    std::sort(one.begin(), one.end());
    std::sort(two.begin(), two.end());
    double ks = 0.0;
    size_t j = 0;
    for (size_t i = 0; i < one.size(); ++i) {
      while (j < two.size() && two[j] <= one[i]) ++j;
      ks = std::max(ks, std::abs((i + 1.0) / n - static_cast<double>(j) / n));
    }
    CHECK(ks < 0.01);
  }
}

TEST_CASE("exit times against the 1/2-laplacian oracles") {
  PathConfig cfg;
  cfg.spec = ProcessSpec::brownian(1);
  cfg.dt = 1e-3;
  cfg.paths = 20000;
  cfg.seed = 5;
  // E_0[tau_{(-1,1)}] solves (1/2)u'' = -1: u = 1 - x^2, value 1
  auto e = exit_time_estimate(cfg, geometry::Domain::box({-1.0}, {1.0}), {0.0});
  CHECK(std::abs(e.value - 1.0) < 0.02);
  CHECK_FALSE(e.censored);

  // immediate exit near the boundary
  auto near = exit_time_estimate(cfg, geometry::Domain::box({-1.0}, {1.0}), {0.999});
  CHECK(near.value < 0.02);
}

TEST_CASE("green bounded probe gates the volume cap") {
  PathConfig cfg;
  cfg.spec = ProcessSpec::brownian(3);
  cfg.dt = 2e-3;
  cfg.paths = 4000;
  auto D = geometry::Domain::ball({0, 0, 0}, 1.0);
  auto rep = green_bounded_probe(cfg, D, {{0, 0, 0}, {0.5, 0, 0}});
  REQUIRE(rep.volume_cap.has_value());
  // cap = (d+2)/(2 pi d) ((d+2)/2)^{2/d} vol^{2/d}
  const double vol = 4.0 * kPi / 3.0;
  const double cap = (5.0 / (6.0 * kPi)) * std::pow(2.5, 2.0 / 3.0) * std::pow(vol, 2.0 / 3.0);
  CHECK(*rep.volume_cap == doctest::Approx(cap).epsilon(1e-12));
  CHECK(rep.sup_estimate.value <= cap);

  // d = 1: the cap is gated off
  PathConfig cfg1;
  cfg1.spec = ProcessSpec::brownian(1);
  cfg1.dt = 1e-3;
  cfg1.paths = 2000;
  auto rep1 = green_bounded_probe(cfg1, geometry::Domain::box({0.0}, {1.0}), {{0.5}});
  CHECK_FALSE(rep1.volume_cap.has_value());

  // unbounded strip: infinite volume, cap skipped
  PathConfig cfg2;
  cfg2.spec = ProcessSpec::brownian(2);
  cfg2.dt = 1e-3;
  cfg2.paths = 2000;
  cfg2.horizon = 10.0;
  auto rep2 = green_bounded_probe(cfg2, geometry::Domain::strip(2, 1.0),
                                  {{0.0, 0.0}, {5.0, 0.2}});
  CHECK_FALSE(rep2.volume_cap.has_value());
}

TEST_CASE("feynman-kac basics") {
  PathConfig cfg;
  cfg.spec = ProcessSpec::brownian(1);
  cfg.dt = 1e-2;
  cfg.paths = 20000;

  // V = 0, f = 1: exactly one, conservative process
  auto unit = feynman_kac(cfg, {}, {}, 1.0, {0.0});
  CHECK(unit.value == doctest::Approx(1.0));
  CHECK(unit.std_error == doctest::Approx(0.0));

  // V = c: deterministic weight e^{-ct}
  const double c = 0.7;
  auto cv = feynman_kac(cfg, [c](const std::vector<double>&) { return c; }, {}, 1.5, {0.0});
  CHECK(std::abs(cv.value - std::exp(-c * 1.5)) < 3.0 * cv.std_error + 1e-12);

  // killing composes multiplicatively: V = 0 on (0,1) gives P_x(tau > t)
  PathConfig killed = cfg;
  killed.killing = geometry::Domain::box({0.0}, {1.0});
  killed.dt = 1e-3;
  killed.paths = 50000;
  auto surv = feynman_kac(killed, {}, {}, 0.3, {0.5});
  // eigenexpansion oracle: P(tau > t) = sum_k odd 4/(k pi) sin(k pi x) e^{-k^2 pi^2 t/2}
  double oracle = 0.0;
  for (int k = 1; k <= 199; k += 2)
    oracle += 4.0 / (k * kPi) * std::sin(k * kPi * 0.5) *
              std::exp(-0.5 * k * k * kPi * kPi * 0.3);
  CHECK(std::abs(surv.value - oracle) < 3.0 * surv.std_error + 0.012);
}

TEST_CASE("fk decay rate for a constant potential") {
  PathConfig cfg;
  cfg.spec = ProcessSpec::brownian(1);
  cfg.dt = 1e-2;
  cfg.paths = 20000;
  const double c = 0.8;
  auto fit = fk_decay_rate(cfg, [c](const std::vector<double>&) { return c; }, {},
                           {1, 2, 4}, {0.0});
  CHECK(std::abs(fit.lambda0 - c) < 2.0 * std::max(fit.std_error, 1e-6) + 1e-9);
}

TEST_CASE("lifetime tails") {
  PathConfig cfg;
  cfg.spec = ProcessSpec::brownian(1);
  cfg.dt = 1e-4;
  cfg.paths = 20000;

  // conservative free process: zero for all t
  auto free = lifetime_tail(cfg, 0.5, {{0.0}, {3.0}});
  CHECK(free.sup_prob == 0.0);

  // absorbed on (0,1): reflection-principle oracle near the boundary
  cfg.killing = geometry::Domain::box({0.0}, {1.0});
  const double eps = 0.1, t = 0.04;
  auto tail = lifetime_tail(cfg, t, {{eps}, {0.5}});
  const double oracle = 2.0 * num::normal_tail(eps / std::sqrt(t));
  CHECK(std::abs(tail.per_point[0] - oracle) < 0.03);
  const double oracle_mid = 2.0 * num::normal_tail(0.45 / std::sqrt(t));
  CHECK(std::abs(tail.per_point[1] - oracle_mid) < 0.02);

  // long horizon on a bounded interval: exit is almost sure
  auto longt = lifetime_tail(cfg, 20.0, {{0.5}});
  CHECK(longt.sup_prob > 0.999);
}

TEST_CASE("results are reproducible across thread counts") {
  PathConfig a;
  a.spec = ProcessSpec::brownian(1);
  a.dt = 1e-2;
  a.paths = 10000;
  a.seed = 12;
  a.threads = 1;
  PathConfig b = a;
  b.threads = 4;
  auto ea = exit_time_estimate(a, geometry::Domain::box({-1.0}, {1.0}), {0.0});
  auto eb = exit_time_estimate(b, geometry::Domain::box({-1.0}, {1.0}), {0.0});
  CHECK(ea.value == eb.value);
  CHECK(ea.std_error == eb.std_error);
}
