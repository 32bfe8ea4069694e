#pragma once

#include <string>
#include <vector>

namespace ptk {

enum class Verdict { In, Out, Inconclusive };

const char* to_string(Verdict v);

enum class LimitDirection { TowardZero, TowardInfinity };

struct FitInfo {
  double exponent = 0.0;  // log-log slope against the abscissa
  double r2 = 0.0;
  bool valid = false;
};

// Sampled decay curve r -> phi(r) (or R -> T(R)) together with the
// three-way limit-to-zero verdict. Abscissae are strictly increasing;
// `direction` says which end the limit lives at.
struct DecayProfile {
  std::vector<double> abscissae;
  std::vector<double> values;  // nonnegative, +inf allowed
  LimitDirection direction = LimitDirection::TowardInfinity;
  Verdict verdict = Verdict::Inconclusive;
  FitInfo fit;
  bool low_confidence = false;
  std::string label;
};

struct DecayRule {
  double decrease_factor = 2.0;  // cumulative over the last three values
  double abs_tol_rel = 1e-3;     // final value below abs_tol_rel * first
  double plateau_tol = 0.10;
};

Verdict classify_decay(const std::vector<double>& toward_limit, const DecayRule& rule);
FitInfo fit_loglog(const DecayProfile& p);

// fills fit and verdict
void finalize_profile(DecayProfile& p, const DecayRule& rule = {});

}  // namespace ptk
