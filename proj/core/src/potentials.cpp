#include "ptk/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptk/cubature.hpp"
#include "ptk/special.hpp"

namespace ptk::potentials {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

using geometry::Domain;
using geometry::DomainKind;
using geometry::MeasureKind;
using kernels::ProcessKind;
using kernels::ProcessSpec;

ExtReal analytic_inf() {
  ExtReal e;
  e.value = kInf;
  return e;
}

ExtReal add(ExtReal a, const ExtReal& b) {
  a.value += b.value;
  a.error += b.error;
  if (b.status == num::QuadStatus::Divergent) a.status = num::QuadStatus::Divergent;
  else if (b.status == num::QuadStatus::Inconclusive &&
           a.status == num::QuadStatus::Converged)
    a.status = num::QuadStatus::Inconclusive;
  return a;
}

ExtReal scaled(ExtReal a, double c) {
  a.value *= c;
  a.error *= std::abs(c);
  return a;
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-13 * (1.0 + std::abs(a[i]))) return false;
  return true;
}

}  // namespace

double RadialKernel::pow_eval(double r, double p) const {
  if (r <= 0.0) {
    if (sing_order > 0.0 || log_sing) return kInf;
    return std::pow(eval(1e-300), p);
  }
  const double v = eval(r);
  if (v <= 0.0) return 0.0;
  return std::pow(v, p);
}

// ---------------------------------------------------------------------------
// kernel handles

RadialKernel reference_kernel(double nu, double beta) {
  RadialKernel k;
  if (nu > beta) {
    k.eval = [nu, beta](double r) { return std::pow(r, beta - nu); };
    k.sing_order = nu - beta;
    k.tail_power = nu - beta;
    k.name = "G(nu=" + std::to_string(nu) + ",beta=" + std::to_string(beta) + ")";
  } else if (nu == beta) {
    k.eval = [](double r) { return r < 1.0 ? std::log(1.0 / r) : 0.0; };
    k.log_sing = true;
    k.tail_power = kInf;
    k.exp_rate = kInf;  // compact support, trivially faster than any exponential
    k.name = "G(log)";
  } else {
    k.eval = [](double) { return 1.0; };
    k.tail_power = 0.0;
    k.name = "G(bounded)";
  }
  return k;
}

namespace {

// log-log table with power/log extrapolation at both ends
struct KernelTable {
  std::vector<double> lr, lv;
  double r_lo, r_hi;
  double sing_order;
  bool log_sing;
  double head_c = 0.0;  // log-kernel slope near zero

  double eval(double r) const {
    if (r <= r_lo) {
      const double v0 = std::exp(lv.front());
      if (log_sing) return v0 + head_c * std::log(r_lo / std::max(r, 1e-300));
      if (sing_order > 0.0)
        return v0 * std::pow(std::max(r, 1e-300) / r_lo, -sing_order);
      return v0;
    }
    if (r >= r_hi) {
      // log-linear continuation from the last segment
      const size_t n = lr.size();
      const double slope = (lv[n - 1] - lv[n - 2]) / (lr[n - 1] - lr[n - 2]);
      return std::exp(lv[n - 1] + slope * (std::log(r) - lr[n - 1]));
    }
    const double x = std::log(r);
    const double u = (x - lr.front()) / (lr[1] - lr[0]);
    const size_t i = std::min(static_cast<size_t>(u), lr.size() - 2);
    const double w = (x - lr[i]) / (lr[i + 1] - lr[i]);
    return std::exp(lv[i] * (1.0 - w) + lv[i + 1] * w);
  }
};

KernelTable build_table(const ProcessSpec& spec, double q, double r_hi, double sing,
                        bool logs) {
  KernelTable t;
  t.r_lo = 1e-7;
  t.r_hi = r_hi;
  t.sing_order = sing;
  t.log_sing = logs;
  const int n = 220;
  t.lr.resize(n);
  t.lv.resize(n);
  const double l0 = std::log(t.r_lo), l1 = std::log(t.r_hi);
  for (int i = 0; i < n; ++i) {
    t.lr[i] = l0 + (l1 - l0) * i / (n - 1);
    double v = kernels::resolvent_kernel_radial(spec, q, std::exp(t.lr[i])).value;
    if (!(v > 0.0) || !std::isfinite(v)) v = 1e-300;
    t.lv[i] = std::log(v);
  }
  if (logs) {
    const double v0 = std::exp(t.lv[0]);
    const double v1 = std::exp(t.lv[1]);
    t.head_c = (v0 - v1) / (t.lr[1] - t.lr[0]);
  }
  return t;
}

}  // namespace

RadialKernel resolvent_handle(const ProcessSpec& spec, double q) {
  if (q < 0.0) throw std::invalid_argument("resolvent_handle: order >= 0");
  if (q == 0.0 && !spec.transient())
    throw std::invalid_argument("resolvent_handle: 0-order requires transience");
  const int d = spec.dim;
  RadialKernel k;
  k.name = spec.name() + (q == 0.0 ? ":green" : ":R" + std::to_string(q));

  // singular behavior at 0
  const double beta = spec.beta_scale();
  if (d > beta) {
    k.sing_order = d - beta;
  } else if (d == beta) {
    k.log_sing = true;
  }
  // tail behavior
  if (q > 0.0) {
    switch (spec.kind) {
      case ProcessKind::Brownian:
        k.exp_rate = std::sqrt(2.0 * q);
        break;
      case ProcessKind::Stable:
        k.tail_power = d + spec.alpha;  // jump-dominated tail J(r)/q^2
        break;
      case ProcessKind::Relativistic:
        k.exp_rate = std::pow(spec.mass, 1.0 / spec.alpha);  // tempered tail
        break;
    }
  } else {
    switch (spec.kind) {
      case ProcessKind::Brownian:
        k.tail_power = d - 2.0;
        break;
      case ProcessKind::Stable:
        k.tail_power = d - spec.alpha;
        break;
      case ProcessKind::Relativistic:
        k.tail_power = d - 2.0;
        break;
    }
  }

  // closed forms
  if (spec.kind == ProcessKind::Brownian && q > 0.0 && (d == 1 || d == 3)) {
    const double s2q = std::sqrt(2.0 * q);
    if (d == 1)
      k.eval = [s2q](double r) { return std::exp(-s2q * r) / s2q; };
    else
      k.eval = [s2q](double r) {
        return r > 0.0 ? std::exp(-s2q * r) / (2.0 * kPi * r) : kInf;
      };
    return k;
  }
  if (spec.kind == ProcessKind::Brownian && q == 0.0) {
    const double c = std::tgamma(0.5 * d - 1.0) / (2.0 * std::pow(kPi, 0.5 * d));
    const double e = 2.0 - d;
    k.eval = [c, e](double r) { return r > 0.0 ? c * std::pow(r, e) : kInf; };
    return k;
  }
  if (spec.kind == ProcessKind::Stable && q == 0.0) {
    const double a = spec.alpha;
    const double c = std::tgamma(0.5 * (d - a)) /
                     (std::pow(2.0, a) * std::pow(kPi, 0.5 * d) * std::tgamma(0.5 * a));
    const double e = a - d;
    k.eval = [c, e](double r) { return r > 0.0 ? c * std::pow(r, e) : kInf; };
    return k;
  }

  // table-backed
  double r_hi = 1e4;
  if (std::isfinite(k.exp_rate) && k.exp_rate > 0.0) r_hi = 60.0 / k.exp_rate + 30.0;
  auto table = std::make_shared<KernelTable>(build_table(spec, q, r_hi, k.sing_order,
                                                         k.log_sing));
  k.eval = [table](double r) { return table->eval(r); };
  return k;
}

// ---------------------------------------------------------------------------
// p_potential

namespace {

// effective free dimension of the domain at infinity
double tail_dimension(const Domain& D) {
  switch (D.kind()) {
    case DomainKind::FullSpace:
      return D.dimension();
    case DomainKind::Strip:
      return D.dimension() - 1;
    case DomainKind::Horn:
      return 0.0;  // integrable width decay
    case DomainKind::Ball:
    case DomainKind::Box:
      return -kInf;  // bounded, no tail
    case DomainKind::Union: {
      double m = -kInf;
      for (const auto& c : D.children()) m = std::max(m, tail_dimension(c));
      return m;
    }
    case DomainKind::Intersection: {
      double m = kInf;
      for (const auto& c : D.children()) m = std::min(m, tail_dimension(c));
      return m;
    }
  }
  return 0.0;
}


// average of g(|y - gc|) 1{lo <= |y - gc| < hi} over the sphere S_s(x),
// with rho = |x - gc|; the window is a theta interval since the chordal
// distance is monotone in the polar angle
double windowed_shell_average(int d, double rho, double s,
                              const geometry::RadialDensity& g, double lo, double hi) {
  auto in_win = [&](double m) { return lo <= m && m < hi; };
  if (s <= 0.0) return in_win(rho) ? g.radial(rho) : 0.0;
  if (rho < 1e-14 * (1.0 + s)) return in_win(s) ? g.radial(s) : 0.0;
  const double m_min = std::abs(rho - s), m_max = rho + s;
  if (m_max <= lo || m_min >= hi) return 0.0;
  auto theta_of = [&](double m) {
    const double c = (rho * rho + s * s - m * m) / (2.0 * rho * s);
    return std::acos(std::clamp(c, -1.0, 1.0));
  };
  const double tlo = m_min >= lo ? 0.0 : theta_of(lo);
  const double thi = (std::isfinite(hi) && m_max >= hi) ? theta_of(hi) : kPi;
  if (thi <= tlo) return 0.0;
  auto f = [&](double th) {
    const double m = std::sqrt(std::max(
        rho * rho + s * s - 2.0 * rho * s * std::cos(th), 0.0));
    return std::pow(std::sin(th), d - 2) * g.radial(m);
  };
  num::QuadOptions o;
  o.rel_tol = 1e-9;
  const double num_int = num::integrate(f, tlo, thi, o).value;
  double denom = 2.0;
  if (d == 2) denom = kPi;
  return num_int / denom;
}

struct RadialSetup {
  std::function<double(double)> frac;  // angular fraction (or weighted average)
  double s_hi = kInf;                  // radial cutoff (finite when known)
  bool exact = true;
  bool valid = true;
};

// exact angular fraction for the structured (domain, region) pairs
RadialSetup exact_fraction(const Domain& D, const Region& region,
                           const std::vector<double>& x) {
  const int d = D.dimension();
  RadialSetup s;
  const auto dist_to = [&](const std::vector<double>& c) {
    return geometry::distance(x.data(), c.data(), d);
  };

  if (D.kind() == DomainKind::FullSpace) {
    if (region.kind == Region::Kind::All) {
      s.frac = [](double) { return 1.0; };
      return s;
    }
    const double rho = dist_to(region.center);
    const double R = region.radius;
    if (region.kind == Region::Kind::Ball) {
      s.frac = [d, rho, R](double r) { return num::sphere_in_ball_fraction(d, rho, r, R); };
      s.s_hi = rho + R;
      return s;
    }
    s.frac = [d, rho, R](double r) {
      return 1.0 - num::sphere_in_ball_fraction(d, rho, r, R);
    };
    return s;
  }

  if (D.kind() == DomainKind::Ball) {
    const double rhoD = dist_to(D.center());
    const double RD = D.radius();
    auto fracD = [d, rhoD, RD](double r) {
      return num::sphere_in_ball_fraction(d, rhoD, r, RD);
    };
    if (region.kind == Region::Kind::All) {
      s.frac = fracD;
      s.s_hi = rhoD + RD;
      return s;
    }
    if (region.kind == Region::Kind::Ball && same_point(region.center, x)) {
      s.frac = fracD;
      s.s_hi = std::min(rhoD + RD, region.radius);
      return s;
    }
    const double RR = region.radius;
    const double cc = geometry::distance(region.center.data(), D.center().data(), d);
    if (same_point(region.center, D.center())) {
      const double rhoR = rhoD;
      if (region.kind == Region::Kind::Ball) {
        const double Rmin = std::min(RD, RR);
        s.frac = [d, rhoR, Rmin](double r) {
          return num::sphere_in_ball_fraction(d, rhoR, r, Rmin);
        };
        s.s_hi = rhoR + Rmin;
        return s;
      }
      // annulus RR <= |y - c| < RD
      if (RR >= RD) {
        s.frac = [](double) { return 0.0; };
        s.s_hi = 0.0;
        return s;
      }
      s.frac = [d, rhoR, RD, RR](double r) {
        return num::sphere_in_ball_fraction(d, rhoR, r, RD) -
               num::sphere_in_ball_fraction(d, rhoR, r, RR);
      };
      s.s_hi = rhoR + RD;
      return s;
    }
    // general two-ball composition around distinct centers
    const double rhoR = dist_to(region.center);
    // fraction of the probe sphere S_r(x) inside both balls
    auto frac_both = [d, rhoD, RD, rhoR, RR, psi = [&] {
      // angle between the directions x -> cD and x -> cR
      double dot = 0.0;
      for (int i = 0; i < d; ++i)
        dot += (D.center()[i] - x[i]) * (region.center[i] - x[i]);
      const double den = rhoD * rhoR;
      if (den < 1e-300) return 0.0;
      return std::acos(std::clamp(dot / den, -1.0, 1.0));
    }()](double r) {
      if (r <= 0.0) return (rhoD < RD && rhoR < RR) ? 1.0 : 0.0;
      // degenerate apexes: the constraint is radial, not angular
      const bool centered_D = rhoD < 1e-14 * (1.0 + RD);
      const bool centered_R = rhoR < 1e-14 * (1.0 + RR);
      if (centered_D && centered_R) return (r < RD && r < RR) ? 1.0 : 0.0;
      if (centered_D)
        return r < RD ? num::sphere_in_ball_fraction(d, rhoR, r, RR) : 0.0;
      if (centered_R)
        return r < RR ? num::sphere_in_ball_fraction(d, rhoD, r, RD) : 0.0;
      if (rhoD + r <= RD) return num::sphere_in_ball_fraction(d, rhoR, r, RR);
      if (rhoR + r <= RR) return num::sphere_in_ball_fraction(d, rhoD, r, RD);
      if (std::abs(rhoD - r) >= RD || std::abs(rhoR - r) >= RR) return 0.0;
      const double c1 = (rhoD * rhoD + r * r - RD * RD) / (2.0 * rhoD * r);
      const double c2 = (rhoR * rhoR + r * r - RR * RR) / (2.0 * rhoR * r);
      return num::two_cap_fraction(d, c1, c2, psi);
    };
    if (region.kind == Region::Kind::Ball) {
      if (cc >= RD + RR) {  // region misses the domain
        s.frac = [](double) { return 0.0; };
        s.s_hi = 0.0;
        return s;
      }
      if (cc + RR <= RD) {
        // region ball inside the domain: single-cap on the region alone
        s.frac = [d, rhoR, RR](double r) {
          return num::sphere_in_ball_fraction(d, rhoR, r, RR);
        };
        s.s_hi = rhoR + RR;
        return s;
      }
      s.frac = frac_both;
      s.s_hi = std::min(rhoD + RD, rhoR + RR);
      return s;
    }
    // Outside region: D minus (D cap region ball)
    if (cc >= RD + RR) {  // excluded ball misses the domain entirely
      s.frac = fracD;
      s.s_hi = rhoD + RD;
      return s;
    }
    s.frac = [fracD, frac_both](double r) {
      return std::max(fracD(r) - frac_both(r), 0.0);
    };
    s.s_hi = rhoD + RD;
    return s;
  }

  if (D.kind() == DomainKind::Strip) {
    const int ax = D.axis();
    const double w2 = 0.5 * D.width();
    const double xa = x[ax];
    auto fracS = [d, xa, w2](double r) {
      if (r <= 0.0) return std::abs(xa) < w2 ? 1.0 : 0.0;
      return num::band_fraction(d, (-w2 - xa) / r, (w2 - xa) / r);
    };
    if (region.kind == Region::Kind::All) {
      s.frac = fracS;
      return s;
    }
    if (region.kind == Region::Kind::Ball && same_point(region.center, x)) {
      s.frac = fracS;
      s.s_hi = region.radius;
      return s;
    }
    s.valid = false;
    return s;
  }

  s.valid = false;
  return s;
}

struct TailInfo {
  double dim;
};

// radial integration of s^{d-1} k(s)^p frac(s) with analytic gates
ExtReal radial_potential(const RadialKernel& k, double p, int d,
                         const std::function<double(double)>& frac, double s_hi,
                         double tail_dim, bool mollified_tol) {
  ExtReal out;
  num::QuadOptions o;
  o.rel_tol = mollified_tol ? 1e-5 : 1e-7;
  o.abs_tol = 0.0;

  const double probe_scale = std::isfinite(s_hi) ? s_hi : 1.0;
  const bool hit0 = frac(1e-9 * probe_scale) > 0.0;

  const double gamma = d - 1 - p * k.sing_order;
  if (hit0 && !k.log_sing && gamma <= -1.0) return analytic_inf();

  auto g = [&](double s) {
    const double f = frac(s);
    if (f <= 0.0) return 0.0;
    // divide out the power part; keep logs and slow factors in g
    const double kv = k.eval(s);
    if (!(kv > 0.0)) return 0.0;
    return std::pow(kv * std::pow(s, k.sing_order), p) * f;
  };

  const double s1 = std::min(std::isfinite(s_hi) ? s_hi : kInf, 1.0);
  double total = 0.0, err = 0.0;
  bool inconclusive = false;

  if (hit0) {
    auto q = num::integrate_power_weighted(g, gamma, s1, o);
    total += q.value;
    err += q.error;
    inconclusive |= !q.ok();
  } else if (s1 > 1e-14) {
    auto gg = [&](double s) {
      const double f = frac(s);
      if (f <= 0.0) return 0.0;
      return k.pow_eval(s, p) * std::pow(s, d - 1.0) * f;
    };
    auto q = num::integrate_power_weighted_band(gg, 0.0, 1e-14 * probe_scale, s1, o);
    total += q.value;
    err += q.error;
    inconclusive |= !q.ok();
  }

  // beyond s1
  auto band = [&](double a, double b) {
    auto gg = [&](double s) {
      const double f = frac(s);
      if (f <= 0.0) return 0.0;
      return k.pow_eval(s, p) * std::pow(s, d - 1.0) * f;
    };
    auto q = num::integrate_power_weighted_band(gg, 0.0, a, b, o);
    total += q.value;
    err += q.error;
    inconclusive |= !q.ok();
  };

  if (std::isfinite(s_hi)) {
    if (s_hi > s1) band(s1, s_hi);
  } else {
    // infinite radial range: gate with the kernel tail against the
    // effective dimension of the domain at infinity
    if (std::isfinite(k.tail_power)) {
      const double et = tail_dim - p * k.tail_power;
      if (et >= 0.0 && tail_dim > -kInf) return analytic_inf();
      const double S = 1e4;
      band(s1, S);
      // analytic power continuation of the last integrand value
      const double f = frac(S);
      if (f > 0.0 && et < 0.0) {
        const double rem = k.pow_eval(S, p) * std::pow(S, d - 1.0) * f * S /
                           (p * k.tail_power - std::max(tail_dim, 0.0));
        total += rem;
        err += 0.1 * rem;
      }
    } else {
      // exponential-type kernel decay
      const double rate = std::isfinite(k.exp_rate) && k.exp_rate > 0.0 ? k.exp_rate : 1.0;
      const double S = s1 + (50.0 / (p * rate)) + 5.0 / rate;
      band(s1, S);
    }
  }

  const double area = num::unit_sphere_area(d);
  out.value = total * area;
  out.error = err * area;
  if (inconclusive) out.status = num::QuadStatus::Inconclusive;
  return out;
}

// potential against a sphere surface measure, exact when the region is
// centered at x or at the sphere center
ExtReal sphere_potential(const RadialKernel& k, double p, const MeasureSpec& mu,
                         const std::vector<double>& x, const Region& region) {
  const int d = mu.dimension();
  const auto& c = mu.center();
  const double R = mu.radius();
  const double rho = geometry::distance(x.data(), c.data(), d);
  const double total_area = num::sphere_area(d, R);

  // theta window [ta, tb] imposed by the region
  double ta = 0.0, tb = kPi;
  bool exact = true;
  if (region.kind != Region::Kind::All) {
    if (same_point(region.center, c)) {
      const bool inside = R < region.radius;
      if (region.kind == Region::Kind::Ball ? !inside : inside) {
        return {};
      }
    } else if (same_point(region.center, x) && rho > 1e-300) {
      const double RR = region.radius;
      const double cth = (rho * rho + R * R - RR * RR) / (2.0 * rho * R);
      double tstar;
      if (cth >= 1.0)
        tstar = 0.0;
      else if (cth <= -1.0)
        tstar = kPi;
      else
        tstar = std::acos(cth);
      if (region.kind == Region::Kind::Ball)
        tb = tstar;
      else
        ta = tstar;
    } else {
      exact = false;
    }
  }
  if (!exact) {
    // fall back to the generic measure integrator
    geometry::Integrand fi;
    const auto xv = x;
    fi.f = [&k, p, xv, d](const double* y) {
      return k.pow_eval(geometry::distance(y, xv.data(), d), p);
    };
    fi.singular_point = x;
    fi.singular_order = p * k.sing_order;
    return geometry::integrate(mu, fi, region);
  }
  if (tb <= ta) return {};

  if (rho < 1e-300) {
    // x at the center: constant chord R
    ExtReal e;
    e.value = k.pow_eval(R, p) * total_area;
    return e;
  }

  const double delta = std::abs(rho - R);  // minimal chord at theta = 0
  auto chord = [&](double th) {
    return std::sqrt(std::max(rho * rho + R * R - 2.0 * rho * R * std::cos(th), 0.0));
  };
  const double ring = 2.0 * std::pow(kPi, 0.5 * (d - 1)) /
                      std::tgamma(0.5 * (d - 1));  // omega_{d-2}
  const double C = ring * std::pow(R, d - 1);
  auto h = [&](double th) {
    return C * std::pow(std::sin(th), d - 2) * k.pow_eval(chord(th), p);
  };

  num::QuadOptions o;
  o.rel_tol = 1e-8;

  ExtReal out;
  if (delta < 1e-12 * (1.0 + R) && ta < 1e-12) {
    // on-sphere singularity: chord ~ sqrt(rho R) * theta near 0
    const double gam = d - 2 - p * k.sing_order;
    if (!k.log_sing && k.sing_order > 0.0 && gam <= -1.0) return analytic_inf();
    // h(th) = th^gam * g(th) with g smooth at 0
    auto g = [&](double th) {
      if (th <= 0.0) th = 1e-300;
      const double dist = std::max(chord(th), 1e-300);
      const double kv = k.eval(dist);
      if (!(kv > 0.0)) return 0.0;
      const double core = std::pow(kv * std::pow(dist, k.sing_order), p);
      const double sfac = th < 1e-8 ? 1.0 : std::sin(th) / th;
      return C * std::pow(sfac, d - 2) * std::pow(dist / th, -p * k.sing_order) * core;
    };
    auto q1 = num::integrate_power_weighted(g, gam, std::min(tb, 1.0), o);
    out.value += q1.value;
    out.error += q1.error;
    if (!q1.ok()) out.status = num::QuadStatus::Inconclusive;
    if (tb > 1.0) {
      auto q2 = num::integrate(h, 1.0, tb, o);
      out.value += q2.value;
      out.error += q2.error;
      if (!q2.ok()) out.status = num::QuadStatus::Inconclusive;
    }
    return out;
  }

  // peaked but finite near ta; seed splits around the peak width
  const double width = delta / std::max(std::sqrt(rho * R), 1e-300);
  std::vector<double> cuts{ta};
  for (double m : {1.0, 10.0, 100.0}) {
    const double c1 = ta + m * width;
    if (c1 < tb) cuts.push_back(c1);
  }
  cuts.push_back(tb);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto q = num::integrate(h, cuts[i], cuts[i + 1], o);
    out.value += q.value;
    out.error += q.error;
    if (!q.ok()) out.status = num::QuadStatus::Inconclusive;
  }
  return out;
}

}  // namespace

ExtReal p_potential(const RadialKernel& k, double p, const MeasureSpec& mu,
                    const std::vector<double>& x, const Region& region) {
  if (p < 1.0) throw std::invalid_argument("p_potential: p >= 1");
  const int d = mu.dimension();
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("p_potential: dimension mismatch");

  switch (mu.kind()) {
    case MeasureKind::Atoms: {
      ExtReal out;
      for (size_t i = 0; i < mu.points().size(); ++i) {
        const auto& pt = mu.points()[i];
        if (mu.masses()[i] <= 0.0) continue;
        if (!region.contains(pt.data(), d)) continue;
        const double dist = geometry::distance(pt.data(), x.data(), d);
        const double kv = k.pow_eval(dist, p);
        if (std::isinf(kv)) return analytic_inf();
        out.value += mu.masses()[i] * kv;
      }
      return out;
    }
    case MeasureKind::SphereSurface:
      return sphere_potential(k, p, mu, x, region);
    case MeasureKind::Mixture: {
      ExtReal out;
      for (size_t i = 0; i < mu.parts().size(); ++i) {
        if (mu.weights()[i] <= 0.0) continue;
        out = add(out, scaled(p_potential(k, p, mu.parts()[i], x, region),
                              mu.weights()[i]));
        if (out.infinite()) return out;
      }
      return out;
    }
    case MeasureKind::Lebesgue:
    case MeasureKind::Density: {
      const Domain& D = mu.domain();
      const bool weighted = mu.kind() == MeasureKind::Density;

      RadialSetup setup;
      if (!weighted) setup = exact_fraction(D, region, x);
      else setup.valid = false;

      // radial densities reduce to windowed shell averages around their
      // center; covers the catalogued density measures without cubature
      if (weighted && !setup.valid) {
        const auto& gf = mu.density_fn();
        std::vector<double> gc(d, 0.0);
        if (!gf.center.empty()) gc = gf.center;
        const double rho = geometry::distance(x.data(), gc.data(), d);
        double win_lo = 0.0, win_hi = kInf;
        double s_hi = gf.tail_radius(d, 1e-14);
        if (std::isfinite(s_hi)) s_hi += rho;
        bool okfast = true;
        if (D.kind() == DomainKind::FullSpace) {
        } else if (D.kind() == DomainKind::Ball && same_point(D.center(), gc)) {
          win_hi = std::min(win_hi, D.radius());
          s_hi = std::min(s_hi, rho + D.radius());
        } else {
          okfast = false;
        }
        if (region.kind == Region::Kind::Ball) {
          if (same_point(region.center, x))
            s_hi = std::min(s_hi, region.radius);
          else if (same_point(region.center, gc))
            win_hi = std::min(win_hi, region.radius);
          else
            okfast = false;
        } else if (region.kind == Region::Kind::Outside) {
          if (same_point(region.center, gc))
            win_lo = std::max(win_lo, region.radius);
          else
            okfast = false;
        }
        if (okfast && std::isfinite(s_hi)) {
          const auto gcopy = gf;
          setup.frac = [d, rho, gcopy, win_lo, win_hi](double s) {
            return windowed_shell_average(d, rho, s, gcopy, win_lo, win_hi);
          };
          setup.s_hi = s_hi;
          setup.valid = true;
          setup.exact = true;
        }
      }

      bool mollified = false;
      if (!setup.valid) {
        // numeric angular average of the indicator (and density weight)
        if (d > 3) return {0.0, 0.0, num::QuadStatus::Inconclusive};
        mollified = true;
        const auto xv = x;
        const auto* Dp = &D;
        const auto* gp = weighted ? &mu.density_fn() : nullptr;
        const Region reg = region;
        setup.frac = [d, xv, Dp, gp, reg](double s) {
          auto fn = [&](const double* y) {
            if (!Dp->contains(y, d) || !reg.contains(y, d)) return 0.0;
            return gp ? (*gp)(y, d) : 1.0;
          };
          return geometry::angular_average(d, xv, s, fn, nullptr);
        };
        setup.exact = false;
        setup.s_hi = kInf;
        if (D.bounded())
          setup.s_hi = D.circumradius() + geometry::norm(x.data(), d);
        if (region.kind == Region::Kind::Ball) {
          const double rr =
              region.radius + geometry::distance(region.center.data(), x.data(), d);
          setup.s_hi = std::min(setup.s_hi, rr);
        }
        if (weighted) {
          const double tr = mu.density_fn().tail_radius(d, 1e-14);
          if (std::isfinite(tr)) {
            const auto& gc = mu.density_fn().center;
            double off = 0.0;
            for (int i = 0; i < d; ++i)
              off += (x[i] - (gc.empty() ? 0.0 : gc[i])) * (x[i] - (gc.empty() ? 0.0 : gc[i]));
            setup.s_hi = std::min(setup.s_hi, tr + std::sqrt(off));
          }
        }
      }

      const double tdim = std::isfinite(setup.s_hi) ? -kInf : tail_dimension(D);
      return radial_potential(k, p, d, setup.frac, setup.s_hi, tdim, mollified);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// sup search

namespace {

// Nelder-Mead maximization in up to 3 dims
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double step, int iters) {
  const size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);
  for (int it = 0; it < iters; ++it) {
    // order: best first
    for (size_t i = 0; i <= n; ++i)
      for (size_t j = i + 1; j <= n; ++j)
        if (val[j] > val[i]) {
          std::swap(val[i], val[j]);
          std::swap(pts[i], pts[j]);
        }
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
    auto make = [&](double coef) {
      std::vector<double> p(n);
      for (size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + coef * (centroid[j] - pts[n][j]);
      return p;
    };
    auto xr = make(1.0);
    const double fr = f(xr);
    if (fr > val[0]) {
      auto xe = make(2.0);
      const double fe = f(xe);
      if (fe > fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr > val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      auto xc = make(-0.5);
      const double fc = f(xc);
      if (fc > val[n]) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j) pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  size_t best = 0;
  for (size_t i = 1; i <= n; ++i)
    if (val[i] > val[best]) best = i;
  return {pts[best], val[best]};
}

void push_unique(std::vector<std::vector<double>>& v, std::vector<double> x) {
  for (const auto& e : v)
    if (same_point(e, x)) return;
  v.push_back(std::move(x));
}

// representative interior point of a domain
std::vector<double> domain_rep(const Domain& D) {
  const int d = D.dimension();
  switch (D.kind()) {
    case DomainKind::Ball:
      return D.center();
    case DomainKind::Box: {
      std::vector<double> m(d);
      for (int i = 0; i < d; ++i) m[i] = 0.5 * (D.lo()[i] + D.hi()[i]);
      return m;
    }
    case DomainKind::Horn: {
      std::vector<double> m(d, 0.0);
      m[0] = D.horn_x1_min() + 0.5;
      return m;
    }
    default:
      return std::vector<double>(d, 0.0);
  }
}

bool measure_interior_point(const MeasureSpec& mu, const Region& region,
                            std::vector<double>& out) {
  const int d = mu.dimension();
  std::vector<std::vector<double>> cands;
  switch (mu.kind()) {
    case MeasureKind::Lebesgue:
    case MeasureKind::Density: {
      cands.push_back(domain_rep(mu.domain()));
      if (region.kind != Region::Kind::All && !region.center.empty()) {
        auto c = region.center;
        cands.push_back(c);
        if (region.kind == Region::Kind::Outside) {
          c[0] += region.radius + 1.0;
          cands.push_back(c);
        }
      }
      for (auto& c : cands) {
        if (mu.domain().contains(c.data(), d) && region.contains(c.data(), d)) {
          out = c;
          return true;
        }
      }
      // a few random probes inside the bounding box
      std::vector<double> lo, hi;
      mu.domain().bounding_box(lo, hi);
      auto rng = num::RngStream::root(0x9d0bull);
      for (int t = 0; t < 256; ++t) {
        std::vector<double> c(d);
        bool okbox = true;
        for (int i = 0; i < d; ++i) {
          if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
            const double base = std::isfinite(lo[i]) ? lo[i] : 0.0;
            c[i] = base + rng.uniform(-10.0, 10.0);
          } else {
            c[i] = rng.uniform(lo[i], hi[i]);
          }
          okbox = okbox && std::isfinite(c[i]);
        }
        if (okbox && mu.domain().contains(c.data(), d) && region.contains(c.data(), d)) {
          out = c;
          return true;
        }
      }
      return false;
    }
    default:
      return false;
  }
}

}  // namespace

SupResult sup_p_potential(const RadialKernel& k, double p, const MeasureSpec& mu,
                          const Region& region, const SupOptions& opts) {
  const int d = mu.dimension();
  SupResult res;
  res.argmax.assign(d, 0.0);

  const bool singular = k.sing_order > 0.0 || k.log_sing;

  // analytic +inf: atoms under a singular kernel
  if (mu.kind() == MeasureKind::Atoms && singular) {
    for (size_t i = 0; i < mu.points().size(); ++i) {
      if (mu.masses()[i] > 0.0 && region.contains(mu.points()[i].data(), d)) {
        res.value = analytic_inf();
        res.argmax = mu.points()[i];
        return res;
      }
    }
  }
  // analytic +inf: interior local divergence of a d-dimensional piece
  if ((mu.kind() == MeasureKind::Lebesgue || mu.kind() == MeasureKind::Density) &&
      d - 1 - p * k.sing_order <= -1.0 && !k.log_sing && k.sing_order > 0.0) {
    std::vector<double> z;
    if (measure_interior_point(mu, region, z)) {
      res.value = analytic_inf();
      res.argmax = z;
      return res;
    }
  }
  // analytic +inf: sphere measure with supercritical local exponent
  if (mu.kind() == MeasureKind::SphereSurface && d - 2 - p * k.sing_order <= -1.0 &&
      k.sing_order > 0.0) {
    auto z = mu.center();
    z[0] += mu.radius();
    if (region.contains(z.data(), d)) {
      res.value = analytic_inf();
      res.argmax = z;
      return res;
    }
  }
  if (mu.kind() == MeasureKind::Mixture) {
    // any part diverging makes the mixture diverge
    for (size_t i = 0; i < mu.parts().size(); ++i) {
      if (mu.weights()[i] <= 0.0) continue;
      auto sub = sup_p_potential(k, p, mu.parts()[i], region, opts);
      if (sub.value.infinite()) return sub;
    }
  }

  // translation invariance: full-space Lebesgue, unrestricted
  if (mu.kind() == MeasureKind::Lebesgue &&
      mu.domain().kind() == DomainKind::FullSpace && region.kind == Region::Kind::All) {
    res.value = p_potential(k, p, mu, res.argmax, region);
    return res;
  }
  // full-space Lebesgue outside a ball: the supremum is the full-space
  // integral, approached as |x| -> infinity
  if (mu.kind() == MeasureKind::Lebesgue &&
      mu.domain().kind() == DomainKind::FullSpace &&
      region.kind == Region::Kind::Outside) {
    res.value = p_potential(k, p, mu, std::vector<double>(d, 0.0), Region::all());
    res.argmax.assign(d, kInf);
    return res;
  }

  auto objective = [&](const std::vector<double>& x) {
    return p_potential(k, p, mu, x, region);
  };

  // anchors
  std::vector<std::vector<double>> anchors = opts.warm_starts;
  const double srad = mu.support_radius();
  switch (mu.kind()) {
    case MeasureKind::Atoms:
      for (const auto& pt : mu.points()) push_unique(anchors, pt);
      break;
    case MeasureKind::SphereSurface: {
      push_unique(anchors, mu.center());
      for (int i = 0; i < d; ++i) {
        auto z = mu.center();
        z[i] += mu.radius();
        push_unique(anchors, z);
        z[i] -= 2.0 * mu.radius();
        push_unique(anchors, z);
      }
      break;
    }
    case MeasureKind::Lebesgue:
    case MeasureKind::Density: {
      push_unique(anchors, domain_rep(mu.domain()));
      if (mu.kind() == MeasureKind::Density && !mu.density_fn().center.empty())
        push_unique(anchors, mu.density_fn().center);
      // coarse grid over the support box
      std::vector<double> lo, hi;
      mu.domain().bounding_box(lo, hi);
      bool finite = true;
      for (int i = 0; i < d; ++i)
        finite = finite && std::isfinite(lo[i]) && std::isfinite(hi[i]);
      if (finite && opts.grid_per_axis > 1) {
        const int g = opts.grid_per_axis;
        int total = 1;
        for (int i = 0; i < d; ++i) total *= g;
        for (int idx = 0; idx < total; ++idx) {
          int rem = idx;
          std::vector<double> c(d);
          for (int i = 0; i < d; ++i) {
            const int j = rem % g;
            rem /= g;
            c[i] = lo[i] + (hi[i] - lo[i]) * (j + 0.5) / g;
          }
          push_unique(anchors, c);
        }
      }
      break;
    }
    case MeasureKind::Mixture:
      for (const auto& part : mu.parts()) {
        auto sub = sup_p_potential(k, p, part, region,
                                   SupOptions{opts.frostman, 2, 10, {}});
        if (!sub.argmax.empty() && std::isfinite(sub.argmax[0]))
          push_unique(anchors, sub.argmax);
      }
      break;
  }
  if (region.kind != Region::Kind::All) {
    push_unique(anchors, region.center);
    for (int i = 0; i < d; ++i) {
      auto z = region.center;
      z[i] += region.radius;
      push_unique(anchors, z);
    }
  }
  if (anchors.empty()) anchors.emplace_back(d, 0.0);

  // Frostman restriction: keep anchors on the support
  const bool sphere_mode = opts.frostman && mu.kind() == MeasureKind::SphereSurface;
  if (opts.frostman) {
    std::vector<std::vector<double>> kept;
    for (auto& a : anchors) {
      if (mu.kind() == MeasureKind::SphereSurface) {
        // project to the sphere
        auto z = a;
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
          z[i] -= mu.center()[i];
          s += z[i] * z[i];
        }
        s = std::sqrt(s);
        if (s < 1e-12) {
          z.assign(d, 0.0);
          z[0] = 1.0;
          s = 1.0;
        }
        for (int i = 0; i < d; ++i) z[i] = mu.center()[i] + mu.radius() * z[i] / s;
        kept.push_back(z);
      } else if (mu.kind() == MeasureKind::Lebesgue || mu.kind() == MeasureKind::Density) {
        if (mu.domain().contains(a.data(), d)) kept.push_back(a);
      } else {
        kept.push_back(a);
      }
    }
    if (!kept.empty()) anchors = std::move(kept);
  }

  double best = -kInf;
  ExtReal best_val;
  std::vector<double> bestx = anchors.front();
  bool anyinc = false;
  for (const auto& a : anchors) {
    auto v = objective(a);
    anyinc |= !v.ok();
    if (v.infinite()) {
      res.value = v;
      res.argmax = a;
      return res;
    }
    if (v.value > best) {
      best = v.value;
      best_val = v;
      bestx = a;
    }
  }

  // local refinement
  const double scale = std::isfinite(srad) ? std::max(srad, 1.0) : 1.0;
  if (sphere_mode && d >= 2) {
    // parametrize the sphere by angles around the best anchor
    const auto& c = mu.center();
    const double R = mu.radius();
    auto to_angles = [&](const std::vector<double>& z) {
      std::vector<double> ang(d - 1, 0.0);
      const double x0 = z[0] - c[0], x1 = z[1] - c[1];
      ang[0] = std::atan2(x1, x0);
      if (d == 3) {
        const double x2 = z[2] - c[2];
        ang[1] = std::acos(std::clamp(x2 / R, -1.0, 1.0));
      }
      return ang;
    };
    auto from_angles = [&](const std::vector<double>& ang) {
      std::vector<double> z(d);
      if (d == 2) {
        z[0] = c[0] + R * std::cos(ang[0]);
        z[1] = c[1] + R * std::sin(ang[0]);
      } else {
        z[0] = c[0] + R * std::sin(ang[1]) * std::cos(ang[0]);
        z[1] = c[1] + R * std::sin(ang[1]) * std::sin(ang[0]);
        z[2] = c[2] + R * std::cos(ang[1]);
      }
      return z;
    };
    auto fang = [&](const std::vector<double>& ang) {
      auto v = objective(from_angles(ang));
      return v.infinite() ? 1e308 : v.value;
    };
    auto [aopt, vopt] = nelder_mead(fang, to_angles(bestx), 0.3, opts.refine_iters);
    if (vopt > best) {
      bestx = from_angles(aopt);
      best_val = objective(bestx);
      best = best_val.value;
    }
  } else {
    auto feval = [&](const std::vector<double>& z) {
      if (opts.frostman &&
          (mu.kind() == MeasureKind::Lebesgue || mu.kind() == MeasureKind::Density) &&
          !mu.domain().contains(z.data(), d))
        return -1e308;
      auto v = objective(z);
      return v.infinite() ? 1e308 : v.value;
    };
    auto [xopt, vopt] = nelder_mead(feval, bestx, 0.15 * scale, opts.refine_iters);
    if (vopt > best && vopt < 1e307) {
      bestx = xopt;
      best_val = objective(bestx);
      best = best_val.value;
    } else if (vopt >= 1e307) {
      best_val = analytic_inf();
      bestx = xopt;
    }
  }

  res.value = best_val;
  res.argmax = bestx;
  res.low_confidence = anyinc || !best_val.ok();
  return res;
}

// ---------------------------------------------------------------------------
// profiles

DecayProfile local_kato_profile(const RadialKernel& k, double p, const MeasureSpec& mu,
                                std::vector<double> radii_decreasing,
                                const ProfileOptions& opts) {
  DecayProfile prof;
  prof.direction = LimitDirection::TowardZero;
  prof.label = "local:" + k.name;
  std::sort(radii_decreasing.begin(), radii_decreasing.end());
  prof.abscissae = radii_decreasing;  // now increasing
  prof.values.assign(prof.abscissae.size(), 0.0);

  SupOptions search = opts.search;
  // evaluate from the largest radius down, warm-starting each search
  for (size_t idx = prof.abscissae.size(); idx-- > 0;) {
    const double r = prof.abscissae[idx];
    auto value_at = [&](const std::vector<double>& x) {
      return p_potential(k, p, mu, x, Region::ball(x, r));
    };
    // the sup over x of the ball potential: reuse sup_p_potential by
    // wrapping through a region factory is not possible (region moves with
    // x), so run the anchor+refine loop on the wrapped objective
    SupResult sr;
    {
      // quick analytic divergence checks mirror sup_p_potential
      const bool singular = k.sing_order > 0.0 || k.log_sing;
      const int d = mu.dimension();
      bool done = false;
      if (mu.kind() == MeasureKind::Atoms && singular) {
        for (size_t i = 0; i < mu.points().size(); ++i)
          if (mu.masses()[i] > 0.0) {
            sr.value = analytic_inf();
            sr.argmax = mu.points()[i];
            done = true;
            break;
          }
      }
      if (!done &&
          (mu.kind() == MeasureKind::Lebesgue || mu.kind() == MeasureKind::Density) &&
          !k.log_sing && k.sing_order > 0.0 &&
          d - 1 - p * k.sing_order <= -1.0) {
        std::vector<double> z;
        if (measure_interior_point(mu, Region::all(), z)) {
          sr.value = analytic_inf();
          sr.argmax = z;
          done = true;
        }
      }
      if (!done && mu.kind() == MeasureKind::SphereSurface && k.sing_order > 0.0 &&
          d - 2 - p * k.sing_order <= -1.0) {
        sr.value = analytic_inf();
        sr.argmax = mu.center();
        sr.argmax[0] += mu.radius();
        done = true;
      }
      if (!done) {
        std::vector<std::vector<double>> anchors = search.warm_starts;
        // measure anchors
        switch (mu.kind()) {
          case MeasureKind::Atoms:
            for (const auto& pt : mu.points()) push_unique(anchors, pt);
            break;
          case MeasureKind::SphereSurface: {
            auto z = mu.center();
            z[0] += mu.radius();
            push_unique(anchors, z);
            break;
          }
          default:
            push_unique(anchors, domain_rep(mu.domain()));
            break;
        }
        if (anchors.empty()) anchors.emplace_back(mu.dimension(), 0.0);
        double best = -kInf;
        ExtReal bv;
        std::vector<double> bx = anchors.front();
        for (const auto& a : anchors) {
          auto v = value_at(a);
          if (v.infinite()) {
            best = kInf;
            bv = v;
            bx = a;
            break;
          }
          if (v.value > best) {
            best = v.value;
            bv = v;
            bx = a;
          }
        }
        if (!std::isinf(best)) {
          auto f = [&](const std::vector<double>& z) {
            auto v = value_at(z);
            return v.infinite() ? 1e308 : v.value;
          };
          auto [xo, vo] = nelder_mead(f, bx, 0.25 * std::max(r, 0.05), 40);
          if (vo > best) {
            bx = xo;
            bv = value_at(bx);
          }
        }
        sr.value = bv;
        sr.argmax = bx;
      }
    }
    prof.values[idx] = sr.value.value;
    if (!sr.value.ok()) prof.low_confidence = true;
    if (!sr.argmax.empty() && std::isfinite(sr.argmax[0]))
      search.warm_starts.assign(1, sr.argmax);
  }
  finalize_profile(prof, opts.rule);
  return prof;
}

DecayProfile tail_profile(const RadialKernel& k, double p, const MeasureSpec& mu,
                          const std::vector<double>& origin,
                          std::vector<double> radii_increasing,
                          const ProfileOptions& opts) {
  DecayProfile prof;
  prof.direction = LimitDirection::TowardInfinity;
  prof.label = "tail:" + k.name;
  std::sort(radii_increasing.begin(), radii_increasing.end());
  prof.abscissae = radii_increasing;
  prof.values.assign(prof.abscissae.size(), 0.0);
  const int d = mu.dimension();

  const double srad = mu.support_radius() + geometry::norm(origin.data(), d);
  SupOptions search = opts.search;
  for (size_t i = 0; i < prof.abscissae.size(); ++i) {
    const double R = prof.abscissae[i];
    if (R > srad) {
      prof.values[i] = 0.0;  // region misses the support entirely
      continue;
    }
    auto sr = sup_p_potential(k, p, mu, Region::outside(origin, R), search);
    prof.values[i] = sr.value.value;
    if (!sr.value.ok() || sr.low_confidence) prof.low_confidence = true;
    if (!sr.argmax.empty() && std::isfinite(sr.argmax[0]))
      search.warm_starts.assign(1, sr.argmax);
  }
  finalize_profile(prof, opts.rule);
  return prof;
}

// ---------------------------------------------------------------------------
// Chen adversarial check

ChenResult chen_condition_check(const RadialKernel& k, double p, const MeasureSpec& nu,
                                double eps, const std::vector<double>& K_center,
                                double K_radius, double delta) {
  ChenResult out;
  const int d = nu.dimension();
  const auto massK = ball_mass(nu, K_center, K_radius);
  if (massK.infinite()) {
    out.note = "nu(K) not finite";
    return out;
  }

  // tail part sup_x int_{K^c} k^p dnu is common to every family member
  auto tail = sup_p_potential(k, p, nu, Region::outside(K_center, K_radius));
  if (tail.value.infinite()) {
    out.verdict = ChenVerdict::Violated;
    out.worst_value = kInf;
    out.note = "tail alone diverges";
    return out;
  }

  double worst = tail.value.value;  // B = empty is always admissible
  std::vector<double> worst_c;
  double worst_r = 0.0;

  if (delta > 0.0) {
    // candidate centers: local-profile argmax points and measure anchors
    std::vector<std::vector<double>> centers;
    {
      SupOptions so;
      so.grid_per_axis = 3;
      auto local = sup_p_potential(k, p, nu, Region::ball(K_center, K_radius), so);
      if (!local.argmax.empty() && std::isfinite(local.argmax[0]))
        push_unique(centers, local.argmax);
    }
    push_unique(centers, K_center);
    if (nu.kind() == MeasureKind::Atoms)
      for (const auto& pt : nu.points()) push_unique(centers, pt);
    if (nu.kind() == MeasureKind::SphereSurface) {
      auto z = nu.center();
      z[0] += nu.radius();
      push_unique(centers, z);
    }
    if (nu.kind() == MeasureKind::Lebesgue || nu.kind() == MeasureKind::Density)
      push_unique(centers, domain_rep(nu.domain()));

    // mass-delta balls at the candidate centers
    for (const auto& c : centers) {
      // bisect for the nu-mass-delta radius (clipped at the K radius)
      double lo = 0.0, hi = K_radius;
      const double mhi = ball_mass(nu, c, hi).value;
      double rB;
      if (mhi <= delta) {
        rB = hi;
      } else {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (ball_mass(nu, c, std::max(mid, 1e-300)).value < delta ? lo : hi) = mid;
        }
        rB = 0.97 * lo;  // stay strictly below delta
      }
      if (rB <= 0.0) continue;
      // sup_x [ tail + ball part ]; the ball part peaks at / near c
      auto value_at = [&](const std::vector<double>& x) {
        auto a = p_potential(k, p, nu, x, Region::outside(K_center, K_radius));
        auto b = p_potential(k, p, nu, x, Region::ball(c, rB));
        return add(a, b);
      };
      std::vector<std::vector<double>> xs{c, K_center};
      if (!tail.argmax.empty() && std::isfinite(tail.argmax[0])) xs.push_back(tail.argmax);
      double best = -kInf;
      for (const auto& x0 : xs) {
        auto v = value_at(x0);
        if (v.infinite()) {
          out.verdict = ChenVerdict::Violated;
          out.worst_value = kInf;
          out.worst_center = c;
          out.worst_radius = rB;
          out.note = "mass-delta ball captures a singularity";
          return out;
        }
        if (v.value > best) best = v.value;
      }
      auto f = [&](const std::vector<double>& z) {
        auto v = value_at(z);
        return v.infinite() ? 1e308 : v.value;
      };
      auto [xo, vo] = nelder_mead(f, c, 0.3 * rB + 0.01, 40);
      (void)xo;
      best = std::max(best, vo);
      if (best > worst) {
        worst = best;
        worst_c = c;
        worst_r = rB;
      }
    }

    // greedy top-density cells of a partition of K, two scales
    if (nu.kind() == MeasureKind::Lebesgue || nu.kind() == MeasureKind::Density) {
      for (int cells_per_axis : {4, 8}) {
        const double h = 2.0 * K_radius / cells_per_axis;
        struct Cell {
          std::vector<double> lo, hi, mid;
          double mass;
        };
        std::vector<Cell> cells;
        int total = 1;
        for (int i = 0; i < d; ++i) total *= cells_per_axis;
        for (int idx = 0; idx < total; ++idx) {
          int rem = idx;
          Cell cell;
          cell.lo.resize(d);
          cell.hi.resize(d);
          cell.mid.resize(d);
          for (int i = 0; i < d; ++i) {
            const int j = rem % cells_per_axis;
            rem /= cells_per_axis;
            cell.lo[i] = K_center[i] - K_radius + j * h;
            cell.hi[i] = cell.lo[i] + h;
            cell.mid[i] = 0.5 * (cell.lo[i] + cell.hi[i]);
          }
          // cell mass approximated by the enclosing-ball mass capped by
          // the enclosed-ball mass average (cheap, adequate for greed)
          const double rin = 0.5 * h;
          cell.mass = ball_mass(nu, cell.mid, rin * std::sqrt(static_cast<double>(d))).value;
          if (cell.mass > 0.0) cells.push_back(std::move(cell));
        }
        std::sort(cells.begin(), cells.end(),
                  [](const Cell& a, const Cell& b) { return a.mass > b.mass; });
        double acc = 0.0;
        std::vector<const Cell*> chosen;
        for (const auto& cell : cells) {
          if (acc + cell.mass >= delta) break;
          acc += cell.mass;
          chosen.push_back(&cell);
          if (chosen.size() >= 8) break;
        }
        if (chosen.empty()) continue;
        // value at the best cell midpoint: tail + sum of cell potentials,
        // cells approximated by their enclosing balls (upper-leaning probe)
        for (const auto* lead : {chosen.front()}) {
          auto x0 = lead->mid;
          auto v = p_potential(k, p, nu, x0, Region::outside(K_center, K_radius));
          double tot = v.value;
          for (const auto* cell : chosen) {
            auto vb = p_potential(k, p, nu, x0,
                                  Region::ball(cell->mid, 0.5 * h));
            if (vb.infinite()) {
              tot = kInf;
              break;
            }
            tot += vb.value;
          }
          if (tot > worst) {
            worst = tot;
            worst_c = lead->mid;
            worst_r = 0.5 * h;
          }
        }
      }
    }
  }

  out.worst_value = worst;
  out.worst_center = worst_c;
  out.worst_radius = worst_r;
  out.verdict = worst < eps ? ChenVerdict::Holds : ChenVerdict::Violated;
  if (std::isinf(worst)) out.verdict = ChenVerdict::Violated;
  return out;
}

// ---------------------------------------------------------------------------
// M(r)

double tail_bound_M(double r, double nu, double beta,
                    const std::function<double(double)>& Phi2,
                    const std::function<double(double)>& V) {
  if (!(r > 0.0)) throw std::invalid_argument("tail_bound_M: r > 0");
  if (nu < beta) throw std::invalid_argument("tail_bound_M: needs nu >= beta");

  // H(Phi2) moment condition
  auto Veff = V ? V : [nu](double t) { return std::pow(t, nu); };
  auto h = [&](double t) { return std::max(Veff(t), std::pow(t, nu)) * Phi2(t) / t; };
  auto hq = num::integrate_half_line(h, 1.0);
  if (hq.status == num::QuadStatus::Divergent || !std::isfinite(hq.value))
    throw std::domain_error("tail_bound_M: H(Phi2) moment diverges");

  const double gamma = nu - beta - 1.0;
  if (gamma <= -1.0) {
    // nu = beta: the u^{-1} endpoint diverges unless Phi2 vanishes at 0
    if (Phi2(1e-9) > 1e-12)
      throw std::domain_error("tail_bound_M: divergent endpoint for nu = beta");
  }
  num::QuadOptions o;
  o.rel_tol = 1e-9;
  double moment = 0.0;
  if (gamma > -1.0) {
    auto q1 = num::integrate_power_weighted(Phi2, gamma, 1.0, o);
    moment += q1.value;
  } else {
    auto g = [&](double u) { return std::pow(u, gamma) * Phi2(u); };
    moment += num::integrate(g, 1e-12, 1.0, o).value;
  }
  auto tail_fn = [&](double u) { return std::pow(u, gamma) * Phi2(u); };
  moment += num::integrate_half_line(tail_fn, 1.0, o).value;
  return beta * std::pow(r, beta - nu) * moment;
}

}  // namespace ptk::potentials
