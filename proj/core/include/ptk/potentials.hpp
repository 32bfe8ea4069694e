#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptk/decay.hpp"
#include "ptk/kernels.hpp"
#include "ptk/measure.hpp"

namespace ptk::potentials {

using geometry::ExtReal;
using geometry::MeasureSpec;
using geometry::Region;

// Radial kernel handle with the singularity/tail metadata the integrators
// need to gate divergence analytically before any quadrature runs.
struct RadialKernel {
  std::function<double(double)> eval;  // k(r) for r > 0; may return +inf at 0
  double sing_order = 0.0;             // k ~ r^{-sing_order} near 0
  bool log_sing = false;               // log(1/r) singularity (sing_order = 0)
  double tail_power = std::numeric_limits<double>::infinity();  // k ~ r^{-tail_power}
  double exp_rate = 0.0;               // decay rate when tail_power = inf
  std::string name;

  double pow_eval(double r, double p) const;  // k(r)^p with the r=0 conventions
};

// Reference kernel of the (nu, beta) pairing.
RadialKernel reference_kernel(double nu, double beta);

// q-order resolvent kernel of the process, table-backed for the kinds with
// no closed form. q = 0 requires transience.
RadialKernel resolvent_handle(const kernels::ProcessSpec& spec, double q);

// \int_region k(|x-y|)^p mu(dy); +inf is a value (divergent potential),
// Inconclusive status marks unreached quadrature tolerance.
ExtReal p_potential(const RadialKernel& k, double p, const MeasureSpec& mu,
                    const std::vector<double>& x, const Region& region = Region::all());

struct SupOptions {
  bool frostman = false;    // restrict the search to supp(mu) ∩ region closure
  int grid_per_axis = 4;
  int refine_iters = 60;
  std::vector<std::vector<double>> warm_starts;
};

struct SupResult {
  ExtReal value;
  std::vector<double> argmax;
  bool low_confidence = false;
};

SupResult sup_p_potential(const RadialKernel& k, double p, const MeasureSpec& mu,
                          const Region& region = Region::all(),
                          const SupOptions& opts = {});

struct ProfileOptions {
  DecayRule rule;
  SupOptions search;
};

// phi(r) = sup_x \int_{B_r(x)} k^p dmu over a decreasing radius ladder.
DecayProfile local_kato_profile(const RadialKernel& k, double p, const MeasureSpec& mu,
                                std::vector<double> radii_decreasing,
                                const ProfileOptions& opts = {});

// T(R) = sup_x \int_{|y-o| >= R} k^p dmu over an increasing ladder.
DecayProfile tail_profile(const RadialKernel& k, double p, const MeasureSpec& mu,
                          const std::vector<double>& origin,
                          std::vector<double> radii_increasing,
                          const ProfileOptions& opts = {});

enum class ChenVerdict { Holds, Violated, Inconclusive };

struct ChenResult {
  ChenVerdict verdict = ChenVerdict::Inconclusive;
  double worst_value = 0.0;        // sup_x of the worst family member
  std::vector<double> worst_center;
  double worst_radius = 0.0;       // radius of the worst mass-delta ball
  std::string note;
};

// Adversarial search over subsets B of K = closed ball(K_center, K_radius)
// with nu(B) < delta; family: mass-delta balls at singularity-attracting
// centers plus greedy top-density partition cells at two scales. "Holds"
// means no counterexample found within this family.
ChenResult chen_condition_check(const RadialKernel& k, double p, const MeasureSpec& nu,
                                double eps, const std::vector<double>& K_center,
                                double K_radius, double delta);

// M(r) = beta r^{beta-nu} \int_0^inf u^{nu-beta-1} Phi2(u) du, for nu >= beta.
// Checks the H(Phi2) moment condition; throws std::domain_error on a
// divergent moment (e.g. nu = beta with Phi2(0) > 0).
double tail_bound_M(double r, double nu, double beta,
                    const std::function<double(double)>& Phi2,
                    const std::function<double(double)>& V = {});

}  // namespace ptk::potentials
