#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptk/potentials.hpp"

namespace ptk::potentials {

struct ClassVerdicts {
  Verdict s_k = Verdict::Inconclusive;       // L^p-Kato
  Verdict s_ek = Verdict::Inconclusive;      // extended L^p-Kato
  Verdict s_d = Verdict::Inconclusive;       // L^p-Dynkin
  Verdict s_d0 = Verdict::Inconclusive;      // L^p-Green-bounded
  Verdict kato_ref = Verdict::Inconclusive;  // K^p_{nu,beta}
  Verdict kato_ref_tail = Verdict::Inconclusive;  // K^{p,inf}_{nu,beta}
  Verdict zhao = Verdict::Inconclusive;      // Green-tight, Zhao sense
  Verdict chen = Verdict::Inconclusive;      // Green-tight, Chen sense
};

struct ClassReport {
  std::string measure_id;
  kernels::ProcessSpec process;
  double p = 1.0;
  bool transient = false;
  ClassVerdicts verdicts;
  std::optional<double> analytic_threshold_p;
  DecayProfile local_ref;   // phi(r) against the reference kernel
  DecayProfile tail_ref;    // T(R) against the reference kernel
  DecayProfile sk_ladder;   // sup R_q^p nu over the q ladder
  DecayProfile zhao_tail;   // T(R) against the 0-order resolvent
  double green_bound_sup = 0.0;  // sup_x R^p nu (finite part)
  std::vector<std::string> warnings;  // implication violations
  std::string chen_note;
};

struct ClassifyOptions {
  std::vector<double> sk_orders = {1, 4, 16, 64, 256, 1024, 4096};
  std::vector<double> local_radii;  // default: geometric ladder 1 -> ~1e-14
  std::vector<double> tail_radii = {2, 4, 8, 16, 32};
  std::vector<double> origin;  // default: 0
  bool run_chen = true;
  SupOptions search;
  DecayRule rule;
};

ClassReport classify(const kernels::ProcessSpec& spec, double p, const MeasureSpec& mu,
                     const ClassifyOptions& opts = {});

enum class CataloguedMeasure { Lebesgue, SphereSurface };

// p* of the catalogued threshold: d/(d-beta)_+ for Lebesgue-type measures,
// (d-1)/(d-beta)_+ for sphere surface measures; +inf when d <= beta.
double analytic_threshold(const kernels::ProcessSpec& spec, CataloguedMeasure kind);

// zero when every emitted implication holds; audit used by the CLI and tests
std::vector<std::string> implication_violations(const ClassVerdicts& v);

}  // namespace ptk::potentials
