#include "ptk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <vector>

namespace ptk::num {

namespace {

// Kronrod 15 / Gauss 7 nodes and weights on [-1,1] (QUADPACK tables).
constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEst {
  double value;
  double error;
};

PanelEst gk15(const Fn1& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv1[7], fv2[7];
  const double fc = f(c);
  double resg = fc * wg[3];
  double resk = fc * wgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    fv1[j] = f(c - dx);
    fv2[j] = f(c + dx);
    resk += wgk[j] * (fv1[j] + fv2[j]);
  }
  for (int j = 0; j < 3; ++j) resg += wg[j] * (fv1[2 * j + 1] + fv2[2 * j + 1]);
  evals += 15;
  const double value = resk * h;
  double err = std::abs((resk - resg) * h);
  // QUADPACK style error sharpening
  double resabs = 0.0;
  resabs += std::abs(fc) * wgk[7];
  for (int j = 0; j < 7; ++j) resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
  resabs *= std::abs(h);
  if (resabs > 0.0 && err > 0.0) {
    const double scale = std::pow(200.0 * err / resabs, 1.5);
    if (scale < 1.0) err = resabs * scale;
  }
  return {value, err};
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

QuadResult integrate(const Fn1& f, double a, double b, const QuadOptions& opts) {
  QuadResult res;
  if (!(a < b)) {
    if (a == b) return res;
    std::swap(a, b);
  }
  auto first = gk15(f, a, b, res.evals);
  std::priority_queue<Interval> heap;
  heap.push({a, b, first.value, first.error});
  double total = first.value, toterr = first.error;
  int n = 1;
  while (toterr > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         n < opts.max_intervals) {
    Interval worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {  // interval exhausted at machine precision
      toterr -= worst.error;
      heap.push({worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    auto left = gk15(f, worst.a, m, res.evals);
    auto right = gk15(f, m, worst.b, res.evals);
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push({worst.a, m, left.value, left.error});
    heap.push({m, worst.b, right.value, right.error});
    ++n;
    if (!std::isfinite(total) || std::abs(total) > 1e300) {
      res.value = std::numeric_limits<double>::infinity();
      res.status = QuadStatus::Divergent;
      return res;
    }
  }
  res.value = total;
  res.error = toterr;
  if (toterr > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)))
    res.status = QuadStatus::Inconclusive;
  return res;
}

QuadResult integrate_half_line(const Fn1& f, double a, const QuadOptions& opts) {
  auto g = [&](double u) {
    const double om = 1.0 - u;
    if (om < 1e-15) return 0.0;  // underflow guard; integrable tails are gone here
    const double s = a + u / om;
    const double fv = f(s);
    return fv == 0.0 ? 0.0 : fv / (om * om);
  };
  return integrate(g, 0.0, 1.0, opts);
}

QuadResult integrate_power_weighted(const Fn1& g, double gamma, double r,
                                    const QuadOptions& opts) {
  QuadResult res;
  if (r <= 0.0) return res;
  if (gamma <= -1.0) {
    res.value = std::numeric_limits<double>::infinity();
    res.status = QuadStatus::Divergent;
    return res;
  }
  const double q = gamma + 1.0;
  const double scale = std::pow(r, q) / q;
  auto h = [&](double u) { return g(r * std::pow(u, 1.0 / q)); };
  QuadResult inner = integrate(h, 0.0, 1.0, opts);
  inner.value *= scale;
  inner.error *= scale;
  return inner;
}

QuadResult integrate_power_weighted_band(const Fn1& g, double gamma, double r0, double r1,
                                         const QuadOptions& opts) {
  auto h = [&](double s) { return std::pow(s, gamma) * g(s); };
  // log substitution keeps wide bands well conditioned
  if (r1 / r0 > 50.0) {
    auto hl = [&](double u) {
      const double s = std::exp(u);
      return std::pow(s, gamma + 1.0) * g(s);
    };
    return integrate(hl, std::log(r0), std::log(r1), opts);
  }
  return integrate(h, r0, r1, opts);
}

QuadResult integrate_paneled(const Fn1& f, double s_max, double panel,
                             const QuadOptions& opts) {
  QuadResult res;
  if (s_max <= 0.0) return res;
  long npanel = std::max(1L, static_cast<long>(std::ceil(s_max / panel)));
  if (npanel > 200000) {
    res.status = QuadStatus::Inconclusive;
    return res;
  }
  const double h = s_max / static_cast<double>(npanel);
  double total = 0.0, toterr = 0.0;
  for (long i = 0; i < npanel; ++i) {
    auto p = gk15(f, i * h, (i + 1) * h, res.evals);
    total += p.value;
    toterr += p.error;
  }
  res.value = total;
  res.error = toterr;
  if (toterr > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)))
    res.status = QuadStatus::Inconclusive;
  return res;
}


const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton from the Chebyshev initial guess
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

}  // namespace ptk::num

