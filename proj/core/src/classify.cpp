#include "ptk/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptk::potentials {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> default_local_radii() {
  std::vector<double> r;
  double v = 1.0;
  for (int i = 0; i < 21; ++i) {
    r.push_back(v);
    v /= 5.0;
  }
  return r;
}

}  // namespace

double analytic_threshold(const kernels::ProcessSpec& spec, CataloguedMeasure kind) {
  const double d = spec.dim;
  const double beta = spec.beta_scale();
  const double num = kind == CataloguedMeasure::Lebesgue ? d : d - 1.0;
  if (d <= beta) return kInf;
  return num / (d - beta);
}

std::vector<std::string> implication_violations(const ClassVerdicts& v) {
  std::vector<std::string> out;
  auto check = [&](Verdict a, Verdict b, const char* msg) {
    if (a == Verdict::In && b == Verdict::Out) out.emplace_back(msg);
  };
  check(v.s_k, v.s_ek, "S_K in but S_EK out");
  check(v.s_ek, v.s_d, "S_EK in but S_D out");
  check(v.chen, v.zhao, "Chen-tight in but Zhao-tight out");
  check(v.zhao, v.s_k, "Zhao-tight in but S_K out");
  check(v.zhao, v.s_d0, "Zhao-tight in but S_D0 out");
  return out;
}

ClassReport classify(const kernels::ProcessSpec& spec, double p, const MeasureSpec& mu,
                     const ClassifyOptions& opts) {
  ClassReport rep;
  rep.process = spec;
  rep.p = p;
  rep.transient = spec.transient();

  const double nu = spec.dim;
  const double beta = spec.beta_scale();
  const int d = spec.dim;
  std::vector<double> origin = opts.origin.empty() ? std::vector<double>(d, 0.0)
                                                   : opts.origin;

  // analytic threshold for the catalogued measure kinds
  switch (mu.kind()) {
    case geometry::MeasureKind::Lebesgue:
    case geometry::MeasureKind::Density:
      rep.analytic_threshold_p = analytic_threshold(spec, CataloguedMeasure::Lebesgue);
      break;
    case geometry::MeasureKind::SphereSurface:
      rep.analytic_threshold_p = analytic_threshold(spec, CataloguedMeasure::SphereSurface);
      break;
    default:
      break;
  }

  ProfileOptions popts;
  popts.rule = opts.rule;
  popts.search = opts.search;

  // --- K^p_{nu,beta}: reference-kernel route -------------------------------
  if (nu < beta) {
    // bounded branch: unit-ball masses must stay bounded
    double supmass = 0.0;
    std::vector<std::vector<double>> probes{origin};
    if (mu.kind() == geometry::MeasureKind::Atoms)
      for (const auto& pt : mu.points()) probes.push_back(pt);
    for (const auto& x : probes) {
      auto m = geometry::ball_mass(mu, x, 1.0);
      supmass = std::max(supmass, m.value);
    }
    rep.verdicts.kato_ref = std::isfinite(supmass) ? Verdict::In : Verdict::Out;
  } else {
    auto G = reference_kernel(nu, beta);
    rep.local_ref = local_kato_profile(
        G, p, mu, opts.local_radii.empty() ? default_local_radii() : opts.local_radii,
        popts);
    rep.verdicts.kato_ref = rep.local_ref.verdict;
  }

  // --- K^{p,inf}_{nu,beta}: reference tail (defined for nu > beta) ---------
  if (nu > beta) {
    auto G = reference_kernel(nu, beta);
    rep.tail_ref = tail_profile(G, p, mu, origin, opts.tail_radii, popts);
    if (rep.verdicts.kato_ref == Verdict::In && rep.tail_ref.verdict == Verdict::In)
      rep.verdicts.kato_ref_tail = Verdict::In;
    else if (rep.verdicts.kato_ref == Verdict::Out ||
             rep.tail_ref.verdict == Verdict::Out)
      rep.verdicts.kato_ref_tail = Verdict::Out;
  }

  // --- S_K ladder over resolvent orders ------------------------------------
  {
    DecayProfile lad;
    lad.direction = LimitDirection::TowardInfinity;
    lad.label = "sk-ladder";
    SupOptions search = opts.search;
    for (double q : opts.sk_orders) {
      auto Rq = resolvent_handle(spec, q);
      auto s = sup_p_potential(Rq, p, mu, Region::all(), search);
      lad.abscissae.push_back(q);
      lad.values.push_back(s.value.value);
      if (s.low_confidence) lad.low_confidence = true;
      if (!s.argmax.empty() && std::isfinite(s.argmax[0]))
        search.warm_starts.assign(1, s.argmax);
    }
    finalize_profile(lad, opts.rule);
    rep.sk_ladder = lad;

    // S_D from the 1-order potential
    const double s1 = lad.values.empty() ? kInf : lad.values.front();
    rep.verdicts.s_d = std::isfinite(s1) ? Verdict::In : Verdict::Out;

    // S_K: the reference route is primary (the classes coincide under the
    // global kernel estimates these processes satisfy); the ladder is a
    // cross-check that can only veto
    rep.verdicts.s_k = rep.verdicts.kato_ref;
    if (rep.verdicts.s_k == Verdict::In && lad.verdict == Verdict::Out) {
      rep.verdicts.s_k = Verdict::Inconclusive;
      rep.warnings.push_back("reference route IN but resolvent ladder plateaued");
    }
    if (rep.verdicts.s_k == Verdict::Out && lad.verdict == Verdict::In) {
      rep.verdicts.s_k = Verdict::Inconclusive;
      rep.warnings.push_back("reference route OUT but resolvent ladder vanishes");
    }

    // S_EK: limit below one
    if (rep.verdicts.s_k == Verdict::In)
      rep.verdicts.s_ek = Verdict::In;
    else if (!lad.values.empty()) {
      const double last = lad.values.back();
      const bool noninc = lad.values.front() >= last * (1.0 - 1e-9);
      if (std::isfinite(last) && last < 1.0 && noninc)
        rep.verdicts.s_ek = Verdict::In;
      else if (!std::isfinite(last) ||
               (lad.verdict == Verdict::Out && last >= 1.0))
        rep.verdicts.s_ek = Verdict::Out;
    }
    if (rep.verdicts.s_d == Verdict::Out) {
      rep.verdicts.s_ek = Verdict::Out;
      rep.verdicts.s_k = Verdict::Out;
    }
  }

  // --- transient-only classes ----------------------------------------------
  if (rep.transient) {
    auto R0 = resolvent_handle(spec, 0.0);
    auto s0 = sup_p_potential(R0, p, mu, Region::all(), opts.search);
    rep.green_bound_sup = s0.value.value;
    rep.verdicts.s_d0 = std::isfinite(s0.value.value) ? Verdict::In : Verdict::Out;

    rep.zhao_tail = tail_profile(R0, p, mu, origin, opts.tail_radii, popts);
    if (rep.verdicts.s_d0 == Verdict::In && rep.verdicts.s_k == Verdict::In &&
        rep.zhao_tail.verdict == Verdict::In)
      rep.verdicts.zhao = Verdict::In;
    else if (rep.verdicts.s_d0 == Verdict::Out || rep.verdicts.s_k == Verdict::Out ||
             rep.zhao_tail.verdict == Verdict::Out)
      rep.verdicts.zhao = Verdict::Out;

    // --- Chen: adversarial subset diagnostic -------------------------------
    if (opts.run_chen) {
      if (rep.verdicts.zhao == Verdict::Out)
        rep.verdicts.chen = Verdict::Out;
      else if (rep.verdicts.zhao == Verdict::In) {
        // calibrate (K, delta, eps) from the measured profiles, then ask the
        // adversary at two shrinking levels
        auto R0k = resolvent_handle(spec, 0.0);
        Verdict chen = Verdict::In;
        std::string note;
        for (double shrink : {1.0, 0.25}) {
          // pick R* with small measured tail
          double Rstar = opts.tail_radii.back();
          double tailv = rep.zhao_tail.values.empty() ? 0.0 : rep.zhao_tail.values.back();
          for (size_t i = 0; i < rep.zhao_tail.values.size(); ++i) {
            if (rep.zhao_tail.values[i] <=
                std::max(rep.zhao_tail.values.front() * 1e-2, 1e-12)) {
              Rstar = rep.zhao_tail.abscissae[i];
              tailv = rep.zhao_tail.values[i];
              break;
            }
          }
          // local mass scale: a mid-ladder radius is small but still
          // resolvable by the mass bisection
          double rphi = 1e-3;
          if (!rep.local_ref.abscissae.empty())
            rphi = rep.local_ref.abscissae[rep.local_ref.abscissae.size() / 3];
          auto bm = geometry::ball_mass(mu, origin, rphi);
          const double delta = std::max(bm.value * shrink, 1e-12);
          // predicted worst mass-delta ball value in the same kernel scale
          double rdelta = rphi;
          {
            double lo = 0.0, hi = std::max(Rstar, rphi * 4.0);
            for (int it = 0; it < 60; ++it) {
              const double mid = 0.5 * (lo + hi);
              (geometry::ball_mass(mu, origin, std::max(mid, 1e-300)).value < delta
                   ? lo
                   : hi) = mid;
            }
            rdelta = std::max(hi, 1e-12);
          }
          const double vpred =
              p_potential(R0k, p, mu, origin, Region::ball(origin, rdelta)).value;
          const double eps = 2.0 * (tailv + vpred + 1e-15);
          auto cr = chen_condition_check(R0k, p, mu, eps, origin, Rstar, delta);
          note = cr.note;
          if (cr.verdict == ChenVerdict::Violated) {
            chen = std::isinf(cr.worst_value) ? Verdict::Out : Verdict::Inconclusive;
            break;
          }
          if (cr.verdict == ChenVerdict::Inconclusive) {
            chen = Verdict::Inconclusive;
            break;
          }
        }
        rep.verdicts.chen = chen;
        rep.chen_note = note;
      }
    }
  }

  auto viols = implication_violations(rep.verdicts);
  rep.warnings.insert(rep.warnings.end(), viols.begin(), viols.end());
  return rep;
}

}  // namespace ptk::potentials
