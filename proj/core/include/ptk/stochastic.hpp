#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptk/geometry.hpp"
#include "ptk/kernels.hpp"
#include "ptk/rng.hpp"

namespace ptk::stochastic {

struct PathConfig {
  kernels::ProcessSpec spec;
  double dt = 1e-3;
  double horizon = 1e3;
  std::optional<geometry::Domain> killing;
  std::uint64_t seed = 1;
  long paths = 100000;
  int threads = 1;
  int batches = 64;  // fixed decomposition keeps results thread-count independent
};

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n = 0;
  double z = 3.0;  // reported intervals are value +- z * std_error
  std::string bias_note;
  bool censored = false;  // horizon-capped paths present: lower-bound semantics

  std::string to_csv_row() const;
};

// one-step displacement; Brownian N(0, dt I), stable via the subordinated
// Gaussian, relativistic via the exponentially tilted subordinator
std::vector<double> sample_increment(const kernels::ProcessSpec& spec, double dt,
                                     num::RngStream& stream);

// positive rho-stable with E exp(-lambda S) = exp(-lambda^rho)
double sample_positive_stable(double rho, num::RngStream& stream);

// tempered subordinator increment: E exp(-lambda T) =
// exp(-dt [ (lambda+theta)^rho - theta^rho ])
double sample_tempered_subordinator(double rho, double theta, double dt,
                                    num::RngStream& stream);

MCEstimate exit_time_estimate(const PathConfig& cfg, const geometry::Domain& D,
                              const std::vector<double>& x0);

struct GreenBoundedReport {
  MCEstimate sup_estimate;
  std::vector<double> argmax;
  std::vector<MCEstimate> per_point;
  std::optional<double> volume_cap;  // only when the catalogued cap applies
};

GreenBoundedReport green_bounded_probe(const PathConfig& cfg, const geometry::Domain& D,
                                       const std::vector<std::vector<double>>& probes);

using PointFn = std::function<double(const std::vector<double>&)>;

// E_x[ e^{-int_0^t V(X_s) ds} f(X_t) ], trapezoid along the path; domain
// killing from cfg composes multiplicatively
MCEstimate feynman_kac(const PathConfig& cfg, const PointFn& V, const PointFn& f,
                       double t, const std::vector<double>& x);

struct DecayFit {
  double lambda0 = 0.0;
  double std_error = 0.0;
  std::vector<double> ts;
  std::vector<double> values;  // estimates per ladder point
  std::vector<double> ses;
};

DecayFit fk_decay_rate(const PathConfig& cfg, const PointFn& V, const PointFn& f,
                       const std::vector<double>& t_ladder,
                       const std::vector<double>& x);

struct LifetimeTailReport {
  double t = 0.0;
  double sup_prob = 0.0;
  std::vector<double> per_point;
};

// sup over the probe grid of P_x(zeta <= t) for the killed process
LifetimeTailReport lifetime_tail(const PathConfig& cfg, double t,
                                 const std::vector<std::vector<double>>& probes);

}  // namespace ptk::stochastic
