#include "ptk/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <atomic>
#include <thread>

#include "ptk/special.hpp"

namespace ptk::stochastic {

namespace {
constexpr double kPi = 3.14159265358979323846;

using kernels::ProcessKind;
using kernels::ProcessSpec;

struct Moments {
  double sum = 0.0, sum2 = 0.0;
  long n = 0, censored = 0;
  void add(double v) {
    sum += v;
    sum2 += v * v;
    ++n;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum2 += o.sum2;
    n += o.n;
    censored += o.censored;
  }
};

MCEstimate finish(const Moments& m, std::string bias) {
  MCEstimate e;
  e.n = m.n;
  e.bias_note = std::move(bias);
  e.censored = m.censored > 0;
  if (m.n > 0) {
    e.value = m.sum / m.n;
    const double var = std::max(m.sum2 / m.n - e.value * e.value, 0.0);
    e.std_error = std::sqrt(var / m.n);
  }
  return e;
}

// fixed batch decomposition with an ordered merge: reproducible for a given
// seed independently of the worker count
template <typename BatchFn>
Moments run_batches(const PathConfig& cfg, BatchFn&& fn) {
  const int nb = std::max(1, cfg.batches);
  const long per = (cfg.paths + nb - 1) / nb;
  std::vector<Moments> parts(nb);
  auto root = num::RngStream::root(cfg.seed);
  auto work = [&](int b) {
    auto stream = root.child(static_cast<std::uint64_t>(b) + 1);
    const long lo = b * per;
    const long hi = std::min<long>(cfg.paths, lo + per);
    for (long i = lo; i < hi; ++i) fn(parts[b], stream);
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (int b = 0; b < nb; ++b) work(b);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        int b;
        while ((b = next.fetch_add(1)) < nb) work(b);
      });
    for (auto& th : pool) th.join();
  }
  Moments total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace

std::string MCEstimate::to_csv_row() const {
  std::ostringstream os;
  os << value << "," << std_error << "," << n << "," << z << ","
     << (censored ? "censored" : "ok") << "," << bias_note;
  return os.str();
}

double sample_positive_stable(double rho, num::RngStream& stream) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("sample_positive_stable: 0 < rho < 1");
  // Kanter's double-uniform transform
  const double u = kPi * stream.uniform();
  const double e = stream.exponential();
  const double b = std::pow(std::sin(rho * u), rho) *
                   std::pow(std::sin((1.0 - rho) * u), 1.0 - rho) / std::sin(u);
  return std::pow(b, 1.0 / rho) * std::pow(e, -(1.0 - rho) / rho);
}

double sample_tempered_subordinator(double rho, double theta, double dt,
                                    num::RngStream& stream) {
  // acceptance rate exp(-theta^rho dt); split the step when it stalls
  if (theta > 0.0 && std::pow(theta, rho) * dt > 25.0)
    return sample_tempered_subordinator(rho, theta, 0.5 * dt, stream) +
           sample_tempered_subordinator(rho, theta, 0.5 * dt, stream);
  const double scale = std::pow(dt, 1.0 / rho);
  for (int guard = 0; guard < 100000000; ++guard) {
    const double s = scale * sample_positive_stable(rho, stream);
    if (theta <= 0.0) return s;
    if (stream.uniform() < std::exp(-theta * s)) return s;
  }
  throw std::runtime_error("sample_tempered_subordinator: rejection stalled");
}

std::vector<double> sample_increment(const ProcessSpec& spec, double dt,
                                     num::RngStream& stream) {
  std::vector<double> dx(spec.dim);
  switch (spec.kind) {
    case ProcessKind::Brownian: {
      const double s = std::sqrt(dt);
      for (auto& v : dx) v = s * stream.normal();
      return dx;
    }
    case ProcessKind::Stable: {
      const double S = std::pow(dt, 2.0 / spec.alpha) *
                       sample_positive_stable(0.5 * spec.alpha, stream);
      const double s = std::sqrt(2.0 * S);
      for (auto& v : dx) v = s * stream.normal();
      return dx;
    }
    case ProcessKind::Relativistic: {
      const double theta = std::pow(spec.mass, 2.0 / spec.alpha);
      const double T = sample_tempered_subordinator(0.5 * spec.alpha, theta, dt, stream);
      const double s = std::sqrt(2.0 * T);
      for (auto& v : dx) v = s * stream.normal();
      return dx;
    }
  }
  return dx;
}

MCEstimate exit_time_estimate(const PathConfig& cfg, const geometry::Domain& D,
                              const std::vector<double>& x0) {
  const int d = cfg.spec.dim;
  if (static_cast<int>(x0.size()) != d)
    throw std::invalid_argument("exit_time_estimate: dimension mismatch");
  if (!D.contains(x0.data(), d))
    throw std::invalid_argument("exit_time_estimate: start point outside the domain");
  const bool diffusive = cfg.spec.kind == ProcessKind::Brownian;

  auto m = run_batches(cfg, [&](Moments& acc, num::RngStream& stream) {
    std::vector<double> x = x0;
    double t = 0.0;
    double bd_prev = diffusive ? D.boundary_distance(x.data(), d) : 0.0;
    while (t < cfg.horizon) {
      auto dx = sample_increment(cfg.spec, cfg.dt, stream);
      for (int i = 0; i < d; ++i) x[i] += dx[i];
      t += cfg.dt;
      if (!D.contains(x.data(), d)) {
        acc.add(diffusive ? t - 0.5 * cfg.dt : t);
        return;
      }
      if (diffusive) {
        // Brownian-bridge crossing between the endpoints kills the O(sqrt(dt))
        // barrier bias; half-space approximation at the nearest boundary
        const double bd = D.boundary_distance(x.data(), d);
        const double pcross = std::exp(-2.0 * bd_prev * bd / cfg.dt);
        if (stream.uniform() < pcross) {
          acc.add(t - 0.5 * cfg.dt);
          return;
        }
        bd_prev = bd;
      }
    }
    acc.add(cfg.horizon);
    ++acc.censored;
  });
  return finish(m, diffusive ? "O(dt) after Brownian-bridge boundary correction"
                             : "jump overshoot, exit at first outside step");
}

GreenBoundedReport green_bounded_probe(const PathConfig& cfg, const geometry::Domain& D,
                                       const std::vector<std::vector<double>>& probes) {
  GreenBoundedReport rep;
  double best = -1.0;
  for (const auto& x : probes) {
    if (!D.contains(x.data(), D.dimension())) continue;
    auto e = exit_time_estimate(cfg, D, x);
    rep.per_point.push_back(e);
    if (e.value > best) {
      best = e.value;
      rep.sup_estimate = e;
      rep.argmax = x;
    }
  }
  const int d = D.dimension();
  const double vol = D.volume();
  if (d >= 2 && std::isfinite(vol)) {
    rep.volume_cap = (d + 2.0) / (2.0 * kPi * d) * std::pow(0.5 * (d + 2.0), 2.0 / d) *
                     std::pow(vol, 2.0 / d);
  }
  return rep;
}

MCEstimate feynman_kac(const PathConfig& cfg, const PointFn& V, const PointFn& f,
                       double t, const std::vector<double>& x) {
  const int d = cfg.spec.dim;
  const long steps = std::max(1L, std::lround(t / cfg.dt));
  const double dt = t / static_cast<double>(steps);

  const bool diffusive = cfg.spec.kind == ProcessKind::Brownian;
  auto m = run_batches(cfg, [&](Moments& acc, num::RngStream& stream) {
    std::vector<double> y = x;
    double vprev = V ? V(y) : 0.0;
    double expo = 0.0;
    bool alive = true;
    double bd_prev =
        cfg.killing && diffusive ? cfg.killing->boundary_distance(y.data(), d) : 0.0;
    for (long k = 0; k < steps; ++k) {
      auto dx = sample_increment(cfg.spec, dt, stream);
      for (int i = 0; i < d; ++i) y[i] += dx[i];
      if (cfg.killing) {
        if (!cfg.killing->contains(y.data(), d)) {
          alive = false;
          break;
        }
        if (diffusive) {
          const double bd = cfg.killing->boundary_distance(y.data(), d);
          if (stream.uniform() < std::exp(-2.0 * bd_prev * bd / dt)) {
            alive = false;
            break;
          }
          bd_prev = bd;
        }
      }
      if (V) {
        const double vcur = V(y);
        expo += 0.5 * dt * (vprev + vcur);  // trapezoid, O(dt^2) for smooth V
        vprev = vcur;
      }
    }
    acc.add(alive ? std::exp(-expo) * (f ? f(y) : 1.0) : 0.0);
  });
  return finish(m, "trapezoid potential integral, O(dt) weak path error");
}

DecayFit fk_decay_rate(const PathConfig& cfg, const PointFn& V, const PointFn& f,
                       const std::vector<double>& t_ladder,
                       const std::vector<double>& x) {
  DecayFit fit;
  for (double t : t_ladder) {
    auto e = feynman_kac(cfg, V, f, t, x);
    if (e.value <= 0.0) break;  // ladder truncated at nonpositive estimates
    fit.ts.push_back(t);
    fit.values.push_back(e.value);
    fit.ses.push_back(e.std_error);
  }
  // weighted least squares of log v against t: slope = -lambda0
  const size_t n = fit.ts.size();
  if (n >= 2) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t i = 0; i < n; ++i) {
      const double sigma = std::max(fit.ses[i] / fit.values[i], 1e-12);
      const double w = 1.0 / (sigma * sigma);
      const double xt = fit.ts[i];
      const double yl = std::log(fit.values[i]);
      sw += w;
      swx += w * xt;
      swy += w * yl;
      swxx += w * xt * xt;
      swxy += w * xt * yl;
    }
    const double den = sw * swxx - swx * swx;
    fit.lambda0 = -(sw * swxy - swx * swy) / den;
    fit.std_error = std::sqrt(sw / den);
  }
  return fit;
}

LifetimeTailReport lifetime_tail(const PathConfig& cfg, double t,
                                 const std::vector<std::vector<double>>& probes) {
  LifetimeTailReport rep;
  rep.t = t;
  if (!cfg.killing) {
    // conservative free process: the life time is infinite
    rep.per_point.assign(probes.size(), 0.0);
    return rep;
  }
  const int d = cfg.spec.dim;
  const long steps = std::max(1L, std::lround(t / cfg.dt));
  const double dt = t / static_cast<double>(steps);
  const bool diffusive = cfg.spec.kind == ProcessKind::Brownian;
  for (const auto& x : probes) {
    auto m = run_batches(cfg, [&](Moments& acc, num::RngStream& stream) {
      std::vector<double> y = x;
      double bd_prev = diffusive ? cfg.killing->boundary_distance(y.data(), d) : 0.0;
      for (long k = 0; k < steps; ++k) {
        auto dx = sample_increment(cfg.spec, dt, stream);
        for (int i = 0; i < d; ++i) y[i] += dx[i];
        if (!cfg.killing->contains(y.data(), d)) {
          acc.add(1.0);
          return;
        }
        if (diffusive) {
          const double bd = cfg.killing->boundary_distance(y.data(), d);
          if (stream.uniform() < std::exp(-2.0 * bd_prev * bd / dt)) {
            acc.add(1.0);
            return;
          }
          bd_prev = bd;
        }
      }
      acc.add(0.0);
    });
    const double p = finish(m, "").value;
    rep.per_point.push_back(p);
    rep.sup_prob = std::max(rep.sup_prob, p);
  }
  return rep;
}

}  // namespace ptk::stochastic
