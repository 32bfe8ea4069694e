#include "ptk/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptk {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In:
      return "IN";
    case Verdict::Out:
      return "OUT";
    default:
      return "INCONCLUSIVE";
  }
}

Verdict classify_decay(const std::vector<double>& seq, const DecayRule& rule) {
  if (seq.empty()) return Verdict::Inconclusive;
  const double last = seq.back();
  if (last == 0.0) return Verdict::In;
  double first = std::numeric_limits<double>::quiet_NaN();
  for (double v : seq) {
    if (std::isfinite(v) && v > 0.0) {
      first = v;
      break;
    }
  }
  if (seq.size() < 3) return Verdict::Inconclusive;
  const double a = seq[seq.size() - 3];
  const double b = seq[seq.size() - 2];
  const double c = seq[seq.size() - 1];
  if (std::isinf(c)) return Verdict::Out;  // not tending to zero
  if (std::isfinite(a) && std::isfinite(b) && std::isfinite(first) && c > 0.0) {
    const bool shrinking = a / c >= rule.decrease_factor * (1.0 - 1e-12);
    const bool small = c < rule.abs_tol_rel * first;
    if (shrinking && small) return Verdict::In;
    const double mx = std::max({a, b, c});
    const double mn = std::min({a, b, c});
    if (mn > 0.0 && mx / mn <= 1.0 + rule.plateau_tol) return Verdict::Out;
  }
  if (std::isinf(a) && std::isinf(b)) return Verdict::Out;
  return Verdict::Inconclusive;
}

FitInfo fit_loglog(const DecayProfile& p) {
  FitInfo fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (size_t i = 0; i < p.values.size(); ++i) {
    const double v = p.values[i];
    const double r = p.abscissae[i];
    if (!(v > 0.0) || !std::isfinite(v) || !(r > 0.0)) continue;
    const double x = std::log(r);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n < 3) return fit;
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-30) return fit;
  fit.exponent = (n * sxy - sx * sy) / den;
  const double ybar = sy / n;
  const double ss_tot = syy - n * ybar * ybar;
  const double slope = fit.exponent;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0;
  for (size_t i = 0; i < p.values.size(); ++i) {
    const double v = p.values[i];
    const double r = p.abscissae[i];
    if (!(v > 0.0) || !std::isfinite(v) || !(r > 0.0)) continue;
    const double e = std::log(v) - (intercept + slope * std::log(r));
    ss_res += e * e;
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.valid = true;
  return fit;
}

void finalize_profile(DecayProfile& p, const DecayRule& rule) {
  std::vector<double> seq = p.values;
  if (p.direction == LimitDirection::TowardZero) std::reverse(seq.begin(), seq.end());
  p.verdict = classify_decay(seq, rule);
  p.fit = fit_loglog(p);
}

}  // namespace ptk
