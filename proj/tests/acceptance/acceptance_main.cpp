// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ptk/classify.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/spectral.hpp"
#include "ptk/stochastic.hpp"

using namespace ptk;
using kernels::EvalPolicy;
using kernels::ProcessSpec;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_threads = 1;

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> run;
};

bool nearly(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::abs(b);
}

std::vector<double> deep_radii() {
  std::vector<double> r;
  double v = 1.0;
  for (int i = 0; i < 21; ++i) {
    r.push_back(v);
    v /= 5.0;
  }
  return r;
}

// --- criterion 1 -----------------------------------------------------------
bool c1(std::string& msg) {
  auto bm = ProcessSpec::brownian(1);
  EvalPolicy quad;
  quad.prefer_closed_form = false;
  double worst = 0.0;
  for (double r : {0.0, 0.5, 1.0, 3.0}) {
    const double exact = std::exp(-std::sqrt(2.0) * r) / std::sqrt(2.0);
    const double numeric = kernels::resolvent_kernel_radial(bm, 1.0, r, quad).value;
    worst = std::max(worst, std::abs(numeric - exact) / exact);
  }
  msg = "max rel err " + std::to_string(worst);
  return worst <= 1e-6;
}

// --- criterion 2 -----------------------------------------------------------
bool c2(std::string& msg) {
  auto bm = ProcessSpec::brownian(3);
  EvalPolicy quad;
  quad.prefer_closed_form = false;
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    const double exact = 1.0 / (2.0 * kPi * r);
    const double numeric = kernels::resolvent_kernel_radial(bm, 0.0, r, quad).value;
    worst = std::max(worst, std::abs(numeric - exact) / exact);
  }
  msg = "max rel err " + std::to_string(worst);
  return worst <= 1e-3;
}

// --- criterion 3 -----------------------------------------------------------
bool c3(std::string& msg) {
  auto G = potentials::reference_kernel(3, 2);
  auto mu = geometry::MeasureSpec::lebesgue(geometry::Domain::ball({0, 0, 0}, 1.0));
  const auto radii = deep_radii();
  bool ok = true;
  for (double p : {1.0, 2.0, 2.75}) {
    auto prof = potentials::local_kato_profile(G, p, mu, radii);
    ok = ok && prof.verdict == Verdict::In;
    if (p == 1.0) {
      ok = ok && std::abs(prof.fit.exponent - 2.0) <= 0.1;
      msg = "p=1 exponent " + std::to_string(prof.fit.exponent);
    }
  }
  for (double p : {3.0, 3.5}) {
    auto prof = potentials::local_kato_profile(G, p, mu, radii);
    ok = ok && prof.verdict == Verdict::Out;
  }
  return ok;
}

// --- criterion 4 -----------------------------------------------------------
bool c4(std::string& msg) {
  auto G = potentials::reference_kernel(3, 2);
  auto sigma = geometry::MeasureSpec::sphere_surface({0, 0, 0}, 1.0);
  const auto radii = deep_radii();
  bool ok = true;
  std::string verdicts;
  for (double p : {1.0, 1.75}) {
    auto prof = potentials::local_kato_profile(G, p, sigma, radii);
    verdicts += to_string(prof.verdict);
    verdicts += " ";
    ok = ok && prof.verdict == Verdict::In;
  }
  for (double p : {2.0, 2.5}) {
    auto prof = potentials::local_kato_profile(G, p, sigma, radii);
    verdicts += to_string(prof.verdict);
    verdicts += " ";
    ok = ok && prof.verdict == Verdict::Out;
  }
  msg = verdicts;
  return ok;
}

// --- criterion 5 -----------------------------------------------------------
bool c5(std::string& msg) {
  bool ok = true;
  // d = 1 < alpha = 1.5: every p is in the class (bounded unit-ball masses)
  potentials::ClassifyOptions fast;
  fast.run_chen = false;
  auto leb1 = geometry::MeasureSpec::lebesgue(geometry::Domain::full_space(1));
  for (double p : {1.0, 4.0, 16.0}) {
    auto rep = potentials::classify(ProcessSpec::stable(1.5, 1), p, leb1, fast);
    ok = ok && rep.verdicts.s_k == Verdict::In;
  }
  // d = 2, alpha = 1: threshold p* = 2
  auto G21 = potentials::reference_kernel(2, 1);
  auto leb2 = geometry::MeasureSpec::lebesgue(geometry::Domain::full_space(2));
  auto in_p = potentials::local_kato_profile(G21, 1.5, leb2, deep_radii());
  auto out_p = potentials::local_kato_profile(G21, 2.5, leb2, deep_radii());
  ok = ok && in_p.verdict == Verdict::In && out_p.verdict == Verdict::Out;
  msg = std::string("stable d2: ") + to_string(in_p.verdict) + "/" +
        to_string(out_p.verdict);
  return ok;
}

// --- criterion 6 -----------------------------------------------------------
bool c6(std::string& msg) {
  double worst_ck = 0.0, worst_mass = 0.0;
  for (const auto& spec : {ProcessSpec::brownian(1), ProcessSpec::stable(1.0, 1),
                           ProcessSpec::relativistic(1.0, 1.0, 1)}) {
    for (double s : {0.25, 0.5, 1.0}) {
      for (double t : {0.25, 0.5, 1.0}) {
        for (double r : {0.0, 0.7, 2.0}) {
          auto f = [&](double z) {
            return kernels::heat_kernel_radial(spec, s, std::abs(z)).value *
                   kernels::heat_kernel_radial(spec, t, std::abs(z - r)).value;
          };
          num::QuadOptions o;
          o.rel_tol = 1e-8;
          const double L = 50.0 * (s + t + r + 1.0);
          double conv = num::integrate(f, -L, L, o).value;
          conv += num::integrate_half_line(f, L, o).value;
          conv += num::integrate_half_line([&](double z) { return f(-z); }, L, o).value;
          const double direct = kernels::heat_kernel_radial(spec, s + t, r).value;
          worst_ck = std::max(worst_ck, std::abs(direct - conv) / direct);
        }
      }
      auto g = [&](double z) {
        return kernels::heat_kernel_radial(spec, s, std::abs(z)).value;
      };
      num::QuadOptions o;
      o.rel_tol = 1e-9;
      const double L = 10.0 * (1.0 + s);
      double mass = num::integrate(g, -L, L, o).value;
      mass += 2.0 * num::integrate_half_line(g, L, o).value;
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
  }
  msg = "CK rel " + std::to_string(worst_ck) + ", mass dev " + std::to_string(worst_mass);
  return worst_ck <= 1e-3 && worst_mass <= 1e-6;
}

// --- criterion 7 -----------------------------------------------------------
bool c7(std::string& msg) {
  bool ok = kernels::psi_ratio(0.0, 1, 1.0) == 1.0;
  for (auto [d, alpha] : {std::pair{1, 1.0}, std::pair{2, 0.5}, std::pair{3, 1.5}}) {
    double prev = 2.0, lo = 1e300, hi = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double r = 0.1 * std::pow(200.0, i / 49.0);
      const double psi = kernels::psi_ratio(r, d, alpha);
      ok = ok && psi < prev;
      prev = psi;
      const double band = psi * std::exp(r) / (1.0 + std::pow(r, 0.5 * (d + alpha - 1)));
      lo = std::min(lo, band);
      hi = std::max(hi, band);
    }
    ok = ok && hi / lo < 10.0;
    if (d == 1) msg = "band ratio(1,1) " + std::to_string(hi / lo);
  }
  return ok;
}

// --- criterion 8 -----------------------------------------------------------
bool c8(std::string& msg) {
  using Eigen::VectorXd;
  bool ok = true;
  auto rng = num::RngStream::root(88);

  auto interval = forms::assemble_local(geometry::Domain::box({0.0}, {1.0}), 1.0 / 256);
  auto square =
      forms::assemble_local(geometry::Domain::box({0.0, 0.0}, {1.0, 1.0}), 1.0 / 32);

  // sin(pi x) margin with the exact continuum potential norm sup x(1-x) = 1/4
  {
    VectorXd u(interval.grid.nodes.size());
    for (size_t i = 0; i < interval.grid.nodes.size(); ++i)
      u[i] = std::sin(kPi * interval.grid.nodes[i][0]);
    auto rep = forms::stollmann_voigt_check(interval, 1.0, {u}, 0.25);
    const double target = kPi * kPi / 16.0 - 0.5;
    ok = ok && nearly(rep.min_margin, target, 0.02);
    msg = "sin margin " + std::to_string(rep.min_margin);
  }

  for (auto* form : {&interval, &square}) {
    std::vector<VectorXd> us;
    for (int k = 0; k < 200; ++k) {
      VectorXd u(form->grid.nodes.size());
      for (int i = 0; i < u.size(); ++i) u[i] = rng.normal();
      us.push_back(u);
    }
    for (double p : {1.0, 2.0}) {
      auto rep = forms::stollmann_voigt_check(*form, p, us);
      ok = ok && rep.min_margin >= -1e-8;
    }
  }
  return ok;
}

// --- criterion 9 -----------------------------------------------------------
bool c9(std::string& msg) {
  const int k = 20;
  const double h = 0.1;
  auto run = [&](const geometry::Domain& D, bool horn) {
    std::vector<forms::SpectralReport> reps;
    std::vector<double> lengths{10, 20, 40};
    for (double L : lengths) {
      forms::Truncation tr;
      tr.lo = {horn ? 0.0 : -0.5 * L, -2.0};
      tr.hi = {horn ? L : 0.5 * L, 2.0};
      reps.push_back(
          forms::embedding_singular_values(forms::assemble_local(D, h, tr), k));
    }
    return forms::truncation_dichotomy(reps, lengths, k);
  };
  auto horn = run(geometry::Domain::horn(2, geometry::HornProfile{}), true);
  auto strip = run(geometry::Domain::strip(2, 1.0), false);

  auto interval = forms::assemble_local(geometry::Domain::box({0.0}, {1.0}), 1.0 / 512);
  auto spec = forms::embedding_singular_values(interval, k);
  bool spectrum_ok = true;
  for (int i = 1; i <= k; ++i)
    spectrum_ok = spectrum_ok &&
                  nearly(spec.singular_values[i - 1], std::sqrt(2.0) / (i * kPi), 0.01);

  msg = "horn drift " + std::to_string(horn.max_rel_drift) + ", strip drift " +
        std::to_string(strip.max_rel_drift) + ", strip count growth " +
        std::to_string(strip.count_growth);
  return horn.stabilized && !strip.stabilized && spectrum_ok;
}

// --- criterion 10 ----------------------------------------------------------
bool c10(std::string& msg) {
  stochastic::PathConfig cfg;
  cfg.dt = 1e-3;
  cfg.paths = 100000;
  cfg.seed = 10;
  cfg.threads = g_threads;

  cfg.spec = ProcessSpec::brownian(3);
  auto ball = stochastic::exit_time_estimate(cfg, geometry::Domain::ball({0, 0, 0}, 1.0),
                                             {0, 0, 0});
  cfg.spec = ProcessSpec::brownian(1);
  auto interval =
      stochastic::exit_time_estimate(cfg, geometry::Domain::box({-1.0}, {1.0}), {0.0});

  // stable exit-time scaling in the ball radius
  cfg.spec = ProcessSpec::stable(1.0, 1);
  cfg.paths = 30000;
  std::vector<double> lr, le;
  for (double r : {0.5, 1.0, 2.0}) {
    auto e = stochastic::exit_time_estimate(cfg, geometry::Domain::box({-r}, {r}), {0.0});
    lr.push_back(std::log(r));
    le.push_back(std::log(e.value));
  }
  const double slope = (le[2] - le[0]) / (lr[2] - lr[0]);

  msg = "ball " + std::to_string(ball.value) + ", interval " +
        std::to_string(interval.value) + ", scaling " + std::to_string(slope);
  return nearly(ball.value, 1.0 / 3.0, 0.02) && nearly(interval.value, 1.0, 0.02) &&
         std::abs(slope - 1.0) <= 0.05;
}

// --- criterion 11 ----------------------------------------------------------
bool c11(std::string& msg) {
  stochastic::PathConfig cfg;
  cfg.spec = ProcessSpec::brownian(1);
  cfg.dt = 1e-3;
  cfg.paths = 100000;
  cfg.seed = 11;
  cfg.threads = g_threads;

  const double c = 0.6;
  auto cv = stochastic::feynman_kac(cfg, [c](const std::vector<double>&) { return c; },
                                    {}, 1.0, {0.0});
  const bool const_ok = std::abs(cv.value - std::exp(-c)) <= 3.0 * cv.std_error;

  auto harmonic = [](const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return 0.5 * s;
  };
  auto fit1 = stochastic::fk_decay_rate(cfg, harmonic, {}, {1, 2, 4, 8}, {0.0});
  cfg.spec = ProcessSpec::brownian(2);
  auto fit2 = stochastic::fk_decay_rate(cfg, harmonic, {}, {1, 2, 4, 8}, {0.0, 0.0});

  msg = "lambda0 d1 " + std::to_string(fit1.lambda0) + ", d2 " +
        std::to_string(fit2.lambda0);
  return const_ok && nearly(fit1.lambda0, 0.5, 0.05) && nearly(fit2.lambda0, 1.0, 0.05);
}

// --- criterion 12 ----------------------------------------------------------
bool c12(std::string& msg) {
  using geometry::Domain;
  using geometry::MeasureSpec;
  using geometry::RadialDensity;

  auto ballmu = MeasureSpec::lebesgue(Domain::ball({0, 0, 0}, 1.0));
  auto leb3 = MeasureSpec::lebesgue(Domain::full_space(3));
  auto sigma = MeasureSpec::sphere_surface({0, 0, 0}, 1.0);
  auto atom = MeasureSpec::atoms({{0.5, 0.0, 0.0}}, {1.0});
  auto leb1 = MeasureSpec::lebesgue(Domain::full_space(1));
  auto ball2 = MeasureSpec::lebesgue(Domain::ball({0, 0}, 1.0));
  auto dens = MeasureSpec::density(
      Domain::full_space(3),
      RadialDensity{RadialDensity::Family::ExpRadial, 1.0, 1.0, {}});

  struct Run {
    ProcessSpec spec;
    double p;
    const MeasureSpec* mu;
    bool chen;
  };
  const std::vector<Run> battery = {
      {ProcessSpec::brownian(3), 1.0, &ballmu, true},
      {ProcessSpec::brownian(3), 2.0, &ballmu, true},
      {ProcessSpec::brownian(3), 3.5, &ballmu, false},
      {ProcessSpec::brownian(3), 1.0, &leb3, false},
      {ProcessSpec::brownian(3), 1.0, &sigma, true},
      {ProcessSpec::brownian(3), 2.5, &sigma, false},
      {ProcessSpec::brownian(3), 1.0, &atom, true},
      {ProcessSpec::brownian(1), 1.0, &leb1, false},
      {ProcessSpec::stable(1.0, 2), 1.5, &ball2, true},
      {ProcessSpec::stable(1.0, 2), 2.5, &ball2, false},
      {ProcessSpec::stable(1.5, 1), 4.0, &leb1, false},
      {ProcessSpec::relativistic(1.0, 1.0, 3), 1.0, &ballmu, true},
      {ProcessSpec::brownian(3), 1.0, &dens, false},
  };
  int violations = 0, runs = 0;
  for (const auto& run : battery) {
    potentials::ClassifyOptions opts;
    opts.run_chen = run.chen;
    auto rep = potentials::classify(run.spec, run.p, *run.mu, opts);
    violations +=
        static_cast<int>(potentials::implication_violations(rep.verdicts).size());
    ++runs;
  }
  msg = std::to_string(runs) + " runs, " + std::to_string(violations) + " violations";
  return runs >= 12 && violations == 0;
}

// --- criterion 13 ----------------------------------------------------------
bool c13(std::string& msg) {
  auto spec = ProcessSpec::brownian(3);
  auto R0 = potentials::resolvent_handle(spec, 0.0);
  auto mu = geometry::MeasureSpec::lebesgue(geometry::Domain::ball({0, 0, 0}, 1.0));
  const double delta = 0.01;
  const double rdelta = std::cbrt(3.0 * delta / (4.0 * kPi));
  const double bound = rdelta / kPi;  // polar oracle at p = 2 with K covering B1
  auto holds =
      potentials::chen_condition_check(R0, 2.0, mu, 2.0 * bound, {0, 0, 0}, 1.5, delta);
  auto violated =
      potentials::chen_condition_check(R0, 2.0, mu, 0.5 * bound, {0, 0, 0}, 1.5, delta);
  msg = "worst " + std::to_string(holds.worst_value) + " vs bound " +
        std::to_string(bound);
  return holds.verdict == potentials::ChenVerdict::Holds &&
         violated.verdict == potentials::ChenVerdict::Violated;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[i + 1]);
  g_threads = static_cast<int>(
      std::max(1u, std::min(4u, std::thread::hardware_concurrency())));

  const std::vector<Criterion> criteria = {
      {1, "1-d Brownian resolvent equality case", c1},
      {2, "Newtonian Green kernel via time quadrature", c2},
      {3, "Kato threshold sweep, Lebesgue on the unit ball", c3},
      {4, "surface-measure threshold", c4},
      {5, "stable thresholds", c5},
      {6, "Chapman-Kolmogorov and sub-Markov property", c6},
      {7, "Psi suite", c7},
      {8, "Stollmann-Voigt audit", c8},
      {9, "embedding dichotomy horn vs strip", c9},
      {10, "exit times and stable scaling", c10},
      {11, "Feynman-Kac decay rates", c11},
      {12, "implication audit battery", c12},
      {13, "Chen/Zhao consistency spot check", c13},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    if (only && crit.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string msg;
    bool ok = false;
    try {
      ok = crit.run(msg);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", crit.id,
                crit.name, secs, msg.empty() ? "" : " -- ", msg.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
