#include "ptk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "ptk/geometry.hpp"
#include "ptk/special.hpp"

namespace ptk::kernels {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExpCutoff = 45.0;  // e^{-45} ~ 2.9e-20
}  // namespace

ProcessSpec ProcessSpec::brownian(int d) {
  if (d < 1) throw std::invalid_argument("brownian: d >= 1");
  ProcessSpec s;
  s.kind = ProcessKind::Brownian;
  s.dim = d;
  return s;
}

ProcessSpec ProcessSpec::stable(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("stable: 0 < alpha < 2");
  if (d < 1) throw std::invalid_argument("stable: d >= 1");
  ProcessSpec s;
  s.kind = ProcessKind::Stable;
  s.dim = d;
  s.alpha = alpha;
  return s;
}

ProcessSpec ProcessSpec::relativistic(double alpha, double m, int d) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("relativistic: 0 < alpha < 2");
  if (!(m > 0.0)) throw std::invalid_argument("relativistic: m > 0");
  if (d < 1) throw std::invalid_argument("relativistic: d >= 1");
  ProcessSpec s;
  s.kind = ProcessKind::Relativistic;
  s.dim = d;
  s.alpha = alpha;
  s.mass = m;
  return s;
}

bool ProcessSpec::transient() const {
  switch (kind) {
    case ProcessKind::Brownian:
      return dim >= 3;
    case ProcessKind::Stable:
      return dim > alpha;
    case ProcessKind::Relativistic:
      return dim >= 3;
  }
  return false;
}

double ProcessSpec::char_exponent(double s) const {
  switch (kind) {
    case ProcessKind::Brownian:
      return 0.5 * s * s;
    case ProcessKind::Stable:
      return std::pow(s, alpha);
    case ProcessKind::Relativistic: {
      const double m2a = std::pow(mass, 2.0 / alpha);
      return std::pow(s * s + m2a, 0.5 * alpha) - mass;
    }
  }
  return 0.0;
}

std::string ProcessSpec::name() const {
  switch (kind) {
    case ProcessKind::Brownian:
      return "brownian(d=" + std::to_string(dim) + ")";
    case ProcessKind::Stable:
      return "stable(alpha=" + std::to_string(alpha) + ",d=" + std::to_string(dim) + ")";
    case ProcessKind::Relativistic:
      return "relativistic(alpha=" + std::to_string(alpha) + ",m=" + std::to_string(mass) +
             ",d=" + std::to_string(dim) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// heat kernels

namespace {

double gaussian_heat(int d, double t, double r) {
  return std::pow(2.0 * kPi * t, -0.5 * d) * std::exp(-r * r / (2.0 * t));
}

// multivariate Cauchy, the alpha = 1 stable law
double cauchy_heat(int d, double t, double r) {
  const double c = std::tgamma(0.5 * (d + 1)) / std::pow(kPi, 0.5 * (d + 1));
  return c * t * std::pow(t * t + r * r, -0.5 * (d + 1));
}

// alpha = 1 relativistic law via the Bessel-K representation
double relativistic1_heat(int d, double m, double t, double r) {
  const double w = std::sqrt(t * t + r * r);
  const double nu = 0.5 * (d + 1);
  const double pref = t * std::pow(2.0 * m, nu) /
                      (std::sqrt(kPi) * std::pow(4.0 * kPi, 0.5 * d));
  const double z = m * w;
  if (z > 650.0) {
    // K_nu underflows; use its leading asymptotic in log space
    const double logk = 0.5 * std::log(kPi / (2.0 * z)) - z;
    return std::exp(m * t + std::log(pref) - nu * std::log(w) + logk);
  }
  return std::exp(m * t) * pref * std::pow(w, -nu) * std::cyl_bessel_k(nu, z);
}

double fourier_smax(const ProcessSpec& spec, double t) {
  // smallest s with t * psi(s) >= cutoff
  const double target = kExpCutoff / t;
  switch (spec.kind) {
    case ProcessKind::Brownian:
      return std::sqrt(2.0 * target);
    case ProcessKind::Stable:
      return std::pow(target, 1.0 / spec.alpha);
    case ProcessKind::Relativistic: {
      const double m2a = std::pow(spec.mass, 2.0 / spec.alpha);
      const double b = std::pow(target + spec.mass, 2.0 / spec.alpha) - m2a;
      return std::sqrt(std::max(b, 1.0));
    }
  }
  return 1.0;
}

KernelValue fourier_heat(const ProcessSpec& spec, double t, double r) {
  KernelValue kv;
  kv.method = KernelMethod::FourierQuadrature;
  const int d = spec.dim;
  const double smax = fourier_smax(spec, t);
  num::QuadOptions o;
  o.rel_tol = 1e-9;
  o.abs_tol = 1e-14;
  num::QuadResult q;
  if (r < 1e-14) {
    auto f = [&](double s) {
      return std::exp(-t * spec.char_exponent(s)) * std::pow(s, d - 1);
    };
    q = num::integrate(f, 0.0, smax, o);
    const double c = num::unit_sphere_area(d) * std::pow(2.0 * kPi, -d);
    q.value *= c;
    q.error *= c;
  } else {
    const double panel = std::min(0.5 * kPi / r, smax / 16.0);
    num::Fn1 f;
    double c = 1.0;
    if (d == 1) {
      f = [&](double s) { return std::exp(-t * spec.char_exponent(s)) * std::cos(s * r); };
      c = 1.0 / kPi;
    } else if (d == 3) {
      f = [&](double s) {
        return std::exp(-t * spec.char_exponent(s)) * s * std::sin(s * r);
      };
      c = 1.0 / (2.0 * kPi * kPi * r);
    } else {
      const double nu = 0.5 * d - 1.0;
      f = [&, nu](double s) {
        return std::exp(-t * spec.char_exponent(s)) * std::pow(s, 0.5 * d) *
               std::cyl_bessel_j(nu, s * r);
      };
      c = std::pow(2.0 * kPi, -0.5 * d) * std::pow(r, 1.0 - 0.5 * d);
    }
    q = num::integrate_paneled(f, smax, panel, o);
    q.value *= c;
    q.error *= c;
  }
  kv.value = std::max(q.value, 0.0);
  kv.error_estimate = q.error + 1e-18;
  kv.status = q.status;
  return kv;
}

// Self-similar profile F(rho) = p_1(rho) for the stable process; evaluation
// at any t uses p_t(r) = t^{-d/alpha} F(r t^{-1/alpha}). Built once per
// (d, alpha) from the Fourier quadrature, with a fitted two-term power tail.
class StableProfile {
 public:
  StableProfile(int d, double alpha) : d_(d), alpha_(alpha) { build(); }

  double eval(double rho, double* rel_err) const {
    if (rho <= rho_lo_) {
      if (rel_err) *rel_err = 1e-6;
      return f0_;
    }
    if (rho >= rho_hi_) {
      if (rel_err) *rel_err = tail_err_;
      const double ra = std::pow(rho, -alpha_);
      return tail_c1_ * std::pow(rho, -(d_ + alpha_)) * (1.0 + tail_c2_ * ra);
    }
    const double lr = std::log(rho);
    const double u = (lr - lr0_) / dlr_;
    const size_t i = std::min(static_cast<size_t>(u), lf_.size() - 2);
    const double w = u - static_cast<double>(i);
    if (rel_err) *rel_err = 1e-4;
    return std::exp(lf_[i] * (1.0 - w) + lf_[i + 1] * w);
  }

 private:
  void build() {
    ProcessSpec spec = ProcessSpec::stable(alpha_, d_);
    f0_ = std::pow(2.0 * kPi, -d_) * num::unit_sphere_area(d_) *
          std::tgamma(static_cast<double>(d_) / alpha_) / alpha_;
    const double smax = std::pow(kExpCutoff, 1.0 / alpha_);
    rho_hi_ = std::min(400.0, 2.0e4 * (0.5 * kPi) / smax);
    const int n = 640;
    lr0_ = std::log(rho_lo_);
    const double lr1 = std::log(rho_hi_);
    dlr_ = (lr1 - lr0_) / (n - 1);
    lf_.resize(n);
    for (int i = 0; i < n; ++i) {
      const double rho = std::exp(lr0_ + i * dlr_);
      double v = fourier_heat(spec, 1.0, rho).value;
      if (!(v > 0.0)) v = 1e-300;
      lf_[i] = std::log(v);
    }
    // fit F ~ c1 rho^{-d-alpha} (1 + c2 rho^{-alpha}) on the last decade
    const double rb = rho_hi_;
    const double ra = rho_hi_ * 0.5;
    const double fb = std::exp(lf_.back());
    const double fa = eval_grid(ra);
    const double gb = fb * std::pow(rb, d_ + alpha_);
    const double ga = fa * std::pow(ra, d_ + alpha_);
    const double xa = std::pow(ra, -alpha_), xb = std::pow(rb, -alpha_);
    // solve g = c1 (1 + c2 x) at the two points
    tail_c2_ = (ga - gb) / (gb * xa - ga * xb);
    tail_c1_ = gb / (1.0 + tail_c2_ * xb);
    tail_err_ = std::pow(rho_hi_, -2.0 * alpha_) * 4.0 + 1e-4;
  }

  double eval_grid(double rho) const {
    const double u = (std::log(rho) - lr0_) / dlr_;
    const size_t i = std::min(static_cast<size_t>(u), lf_.size() - 2);
    const double w = u - static_cast<double>(i);
    return std::exp(lf_[i] * (1.0 - w) + lf_[i + 1] * w);
  }

  int d_;
  double alpha_;
  double f0_ = 0.0;
  double rho_lo_ = 1e-3;
  double rho_hi_ = 400.0;
  double lr0_ = 0.0, dlr_ = 1.0;
  std::vector<double> lf_;
  double tail_c1_ = 0.0, tail_c2_ = 0.0, tail_err_ = 1e-3;
};

const StableProfile& stable_profile(int d, double alpha) {
  static std::mutex mu;
  static std::map<std::pair<int, long long>, std::unique_ptr<StableProfile>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(d, static_cast<long long>(std::llround(alpha * 1e9)));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<StableProfile>(d, alpha)).first;
  return *it->second;
}

}  // namespace

KernelValue heat_kernel_radial(const ProcessSpec& spec, double t, double r,
                               const EvalPolicy& policy) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: t > 0");
  KernelValue kv;
  if (policy.prefer_closed_form) {
    switch (spec.kind) {
      case ProcessKind::Brownian:
        kv.value = gaussian_heat(spec.dim, t, r);
        return kv;
      case ProcessKind::Stable:
        if (spec.alpha == 1.0) {
          kv.value = cauchy_heat(spec.dim, t, r);
          return kv;
        } else {
          // scaling route through the cached unit-time profile
          const auto& prof = stable_profile(spec.dim, spec.alpha);
          const double tf = std::pow(t, -1.0 / spec.alpha);
          double rel = 0.0;
          kv.value = std::pow(t, -static_cast<double>(spec.dim) / spec.alpha) *
                     prof.eval(r * tf, &rel);
          kv.error_estimate = rel * kv.value;
          kv.method = KernelMethod::FourierQuadrature;
          return kv;
        }
      case ProcessKind::Relativistic:
        if (spec.alpha == 1.0) {
          kv.value = relativistic1_heat(spec.dim, spec.mass, t, r);
          return kv;
        }
        break;
    }
  } else if (spec.kind == ProcessKind::Brownian) {
    // quadrature route for Brownian still uses the Gaussian integrand
    kv.value = gaussian_heat(spec.dim, t, r);
    kv.method = KernelMethod::ClosedForm;
    return kv;
  }
  return fourier_heat(spec, t, r);
}

KernelValue heat_kernel(const ProcessSpec& spec, double t, const std::vector<double>& x,
                        const std::vector<double>& y, const EvalPolicy& policy) {
  if (static_cast<int>(x.size()) != spec.dim || static_cast<int>(y.size()) != spec.dim)
    throw std::invalid_argument("heat_kernel: dimension mismatch");
  return heat_kernel_radial(spec, t, geometry::distance(x.data(), y.data(), spec.dim),
                            policy);
}

// ---------------------------------------------------------------------------
// resolvents

namespace {

KernelValue laplace_resolvent(const ProcessSpec& spec, double q, double r) {
  KernelValue kv;
  kv.method = KernelMethod::LaplaceQuadrature;
  const int d = spec.dim;
  const double beta = spec.beta_scale();

  // on-diagonal divergence: p_t(0) ~ t^{-d/beta}
  if (r < 1e-300) {
    if (d >= beta) {
      kv.value = kInf;
      return kv;
    }
    num::QuadOptions o;
    o.rel_tol = 1e-9;
    // integrand ~ t^{-d/beta} e^{-qt}: integrable power at 0 when d < beta
    const double expo = -static_cast<double>(d) / beta;
    auto g = [&](double t) {
      return heat_kernel_radial(spec, t, 0.0).value * std::pow(t, -expo) * std::exp(-q * t);
    };
    // \int_0^T t^{expo} g~(t) dt with g~ smooth, plus the exponential tail
    const double T = q > 0.0 ? kExpCutoff / q : 1e6;
    auto q1 = num::integrate_power_weighted(g, expo, std::min(T, 1.0), o);
    auto g2 = [&](double t) { return heat_kernel_radial(spec, t, 0.0).value * std::exp(-q * t); };
    num::QuadResult q2;
    if (T > 1.0) q2 = num::integrate_half_line(g2, 1.0, o);
    kv.value = q1.value + q2.value;
    kv.error_estimate = q1.error + q2.error;
    if (!q1.ok() || (T > 1.0 && !q2.ok())) kv.status = num::QuadStatus::Inconclusive;
    return kv;
  }

  const double tstar = std::pow(r, beta);
  const bool jumpy = spec.kind != ProcessKind::Brownian;
  const double tmin = jumpy ? 1e-3 * tstar : 0.0;
  double head = 0.0;
  if (jumpy) {
    // p_t(r) = t J_m(r) + O(t^2) for t << r^beta
    head = 0.5 * tmin * tmin * jump_kernel(spec.alpha, spec.mass, d, r);
  }
  auto integrand = [&](double t) {
    if (t <= tmin || t <= 0.0) return 0.0;
    return std::exp(-q * t) * heat_kernel_radial(spec, t, r).value;
  };
  num::QuadOptions o;
  o.rel_tol = 1e-8;
  o.abs_tol = 1e-16;
  auto qa = num::integrate(integrand, tmin, tstar, o);
  auto qb = num::integrate_half_line(integrand, tstar, o);
  kv.value = head + qa.value + qb.value;
  kv.error_estimate = qa.error + qb.error + head;  // head bound counted as error too
  if (!qa.ok() || !qb.ok()) kv.status = num::QuadStatus::Inconclusive;
  return kv;
}

}  // namespace

KernelValue resolvent_kernel_radial(const ProcessSpec& spec, double q, double r,
                                    const EvalPolicy& policy) {
  if (q < 0.0) throw std::invalid_argument("resolvent: order >= 0");
  if (q == 0.0 && !spec.transient())
    throw std::invalid_argument("resolvent: 0-order requires a transient process");
  KernelValue kv;
  if (policy.prefer_closed_form) {
    if (spec.kind == ProcessKind::Brownian && q > 0.0 && (spec.dim == 1 || spec.dim == 3)) {
      const double s2q = std::sqrt(2.0 * q);
      if (spec.dim == 1) {
        kv.value = std::exp(-s2q * r) / s2q;
        return kv;
      }
      kv.value = r > 0.0 ? std::exp(-s2q * r) / (2.0 * kPi * r) : kInf;
      return kv;
    }
    if (q == 0.0 && spec.kind == ProcessKind::Brownian) {
      // Newtonian kernel of the 1/2-Laplacian clock
      const int d = spec.dim;
      if (r <= 0.0) {
        kv.value = kInf;
        return kv;
      }
      kv.value = std::tgamma(0.5 * d - 1.0) / (2.0 * std::pow(kPi, 0.5 * d)) *
                 std::pow(r, 2.0 - d);
      return kv;
    }
    if (q == 0.0 && spec.kind == ProcessKind::Stable) {
      const int d = spec.dim;
      const double a = spec.alpha;
      if (r <= 0.0) {
        kv.value = kInf;
        return kv;
      }
      kv.value = std::tgamma(0.5 * (d - a)) /
                 (std::pow(2.0, a) * std::pow(kPi, 0.5 * d) * std::tgamma(0.5 * a)) *
                 std::pow(r, a - d);
      return kv;
    }
  }
  if (r < 1e-300) {
    // the closed forms above already covered the finite diagonal cases
    if (spec.dim >= spec.beta_scale()) {
      kv.value = kInf;
      return kv;
    }
  }
  return laplace_resolvent(spec, q, r);
}

KernelValue resolvent_kernel(const ProcessSpec& spec, double q,
                             const std::vector<double>& x, const std::vector<double>& y,
                             const EvalPolicy& policy) {
  if (static_cast<int>(x.size()) != spec.dim || static_cast<int>(y.size()) != spec.dim)
    throw std::invalid_argument("resolvent: dimension mismatch");
  return resolvent_kernel_radial(spec, q, geometry::distance(x.data(), y.data(), spec.dim),
                                 policy);
}

// ---------------------------------------------------------------------------
// reference kernel, interval Green function

KernelValue green_kernel_reference(double nu, double beta, double r) {
  KernelValue kv;
  if (nu > beta) {
    kv.value = r > 0.0 ? std::pow(r, beta - nu) : kInf;
  } else if (nu == beta) {
    if (r <= 0.0)
      kv.value = kInf;
    else
      kv.value = r < 1.0 ? std::log(1.0 / r) : 0.0;
  } else {
    kv.value = 1.0;  // bounded branch: the class test is a unit-ball mass bound
  }
  return kv;
}

double interval_green(double a, double b, double x, double y) {
  if (!(a < x && x < b) || !(a < y && y < b))
    throw std::invalid_argument("interval_green: arguments must lie in (a,b)");
  const double lo = std::min(x, y), hi = std::max(x, y);
  return 2.0 * (lo - a) * (b - hi) / (b - a);
}

// ---------------------------------------------------------------------------
// Psi and the jump kernel

double psi_I(double r, int d, double alpha) {
  const double p = 0.5 * (d + alpha);
  // log substitution s = e^u; double-exponential decay at both ends
  double ulo = -(2.0 * kExpCutoff) / p - 4.0;
  if (r > 0.0) ulo = std::min(ulo, 2.0 * std::log(r) - std::log(kExpCutoff) - 2.0);
  const double uhi = std::log(4.0 * (kExpCutoff + p * 10.0)) + 2.0;
  auto f = [&](double u) {
    const double s = std::exp(u);
    return std::exp(p * u - 0.25 * s - (r > 0.0 ? r * r / s : 0.0));
  };
  num::QuadOptions o;
  o.rel_tol = 1e-11;
  o.abs_tol = 0.0;
  return num::integrate(f, ulo, uhi, o).value;
}

double psi_ratio(double r, int d, double alpha) {
  if (r < 0.0) throw std::invalid_argument("psi: r >= 0");
  if (r == 0.0) return 1.0;
  return psi_I(r, d, alpha) / psi_I(0.0, d, alpha);
}

double jump_constant(int d, double alpha) {
  return alpha * std::pow(2.0, d + alpha) * std::tgamma(0.5 * (d + alpha)) /
         (std::pow(2.0, d + 1) * std::pow(kPi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha));
}

double jump_kernel(double alpha, double m, int d, double r) {
  if (r <= 0.0) return kInf;
  const double psi = m > 0.0 ? psi_ratio(std::pow(m, 1.0 / alpha) * r, d, alpha) : 1.0;
  return jump_constant(d, alpha) * psi * std::pow(r, -(d + alpha));
}

// ---------------------------------------------------------------------------
// envelopes

double phi_envelope(double alpha, double m, int d, double C, double t, double r) {
  if (!(m > 0.0)) throw std::invalid_argument("phi_envelope: m > 0");
  if (t <= 1.0 / m) {
    const double a = std::pow(t, -static_cast<double>(d) / alpha);
    const double b = r > 0.0 ? t * jump_kernel(alpha, m, d, r) : kInf;
    return std::min(a, b);
  }
  const double m1a = std::pow(m, 1.0 / alpha);
  const double m2a1 = std::pow(m, 2.0 / alpha - 1.0);
  const double expo = std::min(m1a * r, m2a1 * r * r / t);
  return std::pow(m, static_cast<double>(d) / alpha - 0.5 * d) * std::pow(t, -0.5 * d) *
         std::exp(-expo / C);
}

EnvelopePair heat_envelope(double alpha, double m, int d, double t, double r, double C1,
                           double C2) {
  if (!(C1 > 0.0 && C2 > 0.0)) throw std::invalid_argument("heat_envelope: C1, C2 > 0");
  EnvelopePair e;
  e.lower = phi_envelope(alpha, m, d, 1.0 / C1, t, r) / C2;
  e.upper = phi_envelope(alpha, m, d, C1, t, r) * C2;
  return e;
}

double ultracontractivity_bound(const ProcessSpec& spec, double t, double C2) {
  if (!(t > 0.0)) throw std::invalid_argument("ultracontractivity_bound: t > 0");
  switch (spec.kind) {
    case ProcessKind::Brownian:
      return std::pow(2.0 * kPi * t, -0.5 * spec.dim);
    case ProcessKind::Stable: {
      const int d = spec.dim;
      const double c = std::pow(2.0 * kPi, -d) * num::unit_sphere_area(d) *
                       std::tgamma(static_cast<double>(d) / spec.alpha) / spec.alpha;
      return c * std::pow(t, -static_cast<double>(d) / spec.alpha);
    }
    case ProcessKind::Relativistic: {
      const double d = spec.dim;
      return C2 * std::pow(spec.mass, d / spec.alpha - 0.5 * d) *
             (std::pow(t, -d / spec.alpha) + std::pow(t, -0.5 * d));
    }
  }
  return 0.0;
}

}  // namespace ptk::kernels
