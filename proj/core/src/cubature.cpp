#include "ptk/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ptk::num {

namespace {

// Gauss-Legendre 5 and 3 point tensor rules.
constexpr double g5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                           0.5384693101056831, 0.9061798459386640};
constexpr double g5w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                          0.4786286704993665, 0.2369268850561891};
constexpr double g3x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double g3w[3] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};

struct Box {
  std::array<double, 3> lo, hi;
  double value, error;
  bool operator<(const Box& o) const { return error < o.error; }
};

struct Est {
  double value, error;
};

Est eval_box(const FnNd& f, int d, const std::array<double, 3>& lo,
             const std::array<double, 3>& hi, long& evals) {
  std::array<double, 3> c{}, h{};
  for (int k = 0; k < d; ++k) {
    c[k] = 0.5 * (lo[k] + hi[k]);
    h[k] = 0.5 * (hi[k] - lo[k]);
  }
  double jac = 1.0;
  for (int k = 0; k < d; ++k) jac *= h[k];

  double s5 = 0.0, s3 = 0.0;
  int n5 = 1, n3 = 1;
  for (int k = 0; k < d; ++k) {
    n5 *= 5;
    n3 *= 3;
  }
  double x[3];
  for (int i = 0; i < n5; ++i) {
    int idx = i;
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const int j = idx % 5;
      idx /= 5;
      x[k] = c[k] + h[k] * g5x[j];
      w *= g5w[j];
    }
    s5 += w * f(x);
  }
  for (int i = 0; i < n3; ++i) {
    int idx = i;
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const int j = idx % 3;
      idx /= 3;
      x[k] = c[k] + h[k] * g3x[j];
      w *= g3w[j];
    }
    s3 += w * f(x);
  }
  evals += n5 + n3;
  return {s5 * jac, std::abs(s5 - s3) * jac};
}

}  // namespace

QuadResult integrate_box(const FnNd& f, const std::vector<double>& lo,
                         const std::vector<double>& hi, const CubOptions& opts) {
  const int d = static_cast<int>(lo.size());
  QuadResult res;
  std::array<double, 3> l{}, h{};
  for (int k = 0; k < d; ++k) {
    l[k] = lo[k];
    h[k] = hi[k];
    if (!(h[k] > l[k])) return res;
  }
  auto first = eval_box(f, d, l, h, res.evals);
  std::priority_queue<Box> heap;
  heap.push({l, h, first.value, first.error});
  double total = first.value, toterr = first.error;
  long n = 1;
  while (toterr > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         n < opts.max_boxes) {
    Box worst = heap.top();
    heap.pop();
    int axis = 0;
    double wmax = worst.hi[0] - worst.lo[0];
    for (int k = 1; k < d; ++k) {
      const double w = worst.hi[k] - worst.lo[k];
      if (w > wmax) {
        wmax = w;
        axis = k;
      }
    }
    const double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    if (mid <= worst.lo[axis] || mid >= worst.hi[axis]) {
      toterr -= worst.error;
      heap.push({worst.lo, worst.hi, worst.value, 0.0});
      continue;
    }
    Box a = worst, b = worst;
    a.hi[axis] = mid;
    b.lo[axis] = mid;
    auto ea = eval_box(f, d, a.lo, a.hi, res.evals);
    auto eb = eval_box(f, d, b.lo, b.hi, res.evals);
    total += ea.value + eb.value - worst.value;
    toterr += ea.error + eb.error - worst.error;
    a.value = ea.value;
    a.error = ea.error;
    b.value = eb.value;
    b.error = eb.error;
    heap.push(a);
    heap.push(b);
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

}  // namespace ptk::num
