#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace ptk::num {

enum class QuadStatus { Converged, Inconclusive, Divergent };

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  QuadStatus status = QuadStatus::Converged;
  long evals = 0;

  bool ok() const { return status == QuadStatus::Converged; }
};

struct QuadOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  int max_intervals = 4000;
};

using Fn1 = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
QuadResult integrate(const Fn1& f, double a, double b, const QuadOptions& opts = {});

// \int_a^\infty f, via u -> a + u/(1-u).
QuadResult integrate_half_line(const Fn1& f, double a, const QuadOptions& opts = {});

// \int_0^r s^gamma g(s) ds with gamma > -1 and g smooth; substitution
// s = r u^{1/(gamma+1)} removes the endpoint weight exactly.
QuadResult integrate_power_weighted(const Fn1& g, double gamma, double r,
                                    const QuadOptions& opts = {});

// Same weight on [r0, r1], 0 < r0 < r1 (no singular endpoint, plain adaptive).
QuadResult integrate_power_weighted_band(const Fn1& g, double gamma, double r0, double r1,
                                         const QuadOptions& opts = {});

// Sum of fixed GK15 panels of width <= panel for amp(s)*osc(s) style
// integrands on [0, s_max]; used by the radial Fourier inversions.
QuadResult integrate_paneled(const Fn1& f, double s_max, double panel,
                             const QuadOptions& opts = {});

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// cached Gauss-Legendre rules (Newton on the Legendre recurrence)
const GaussLegendre& gauss_legendre(int n);

}  // namespace ptk::num
