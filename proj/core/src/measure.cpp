#include "ptk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptk/cubature.hpp"
#include "ptk/special.hpp"

namespace ptk::geometry {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

ExtReal from_quad(const num::QuadResult& q) {
  ExtReal e;
  e.value = q.value;
  e.error = q.error;
  e.status = q.status;
  return e;
}

ExtReal add(ExtReal a, const ExtReal& b) {
  a.value += b.value;
  a.error += b.error;
  if (b.status == num::QuadStatus::Divergent || std::isinf(a.value))
    a.status = num::QuadStatus::Divergent;
  else if (b.status == num::QuadStatus::Inconclusive &&
           a.status == num::QuadStatus::Converged)
    a.status = num::QuadStatus::Inconclusive;
  return a;
}

ExtReal scale(ExtReal a, double c) {
  a.value *= c;
  a.error *= std::abs(c);
  return a;
}

std::vector<double> clip_box_lo(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}
std::vector<double> clip_box_hi(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

}  // namespace

double RadialDensity::radial(double r) const {
  switch (family) {
    case Family::Const:
      return scale;
    case Family::ExpRadial:
      return scale * std::exp(-rate * r);
    case Family::Gaussian:
      return scale * std::exp(-rate * r * r);
  }
  return 0.0;
}

double RadialDensity::operator()(const double* y, int d) const {
  if (family == Family::Const) return scale;
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double c = center.empty() ? 0.0 : center[i];
    s += (y[i] - c) * (y[i] - c);
  }
  return radial(std::sqrt(s));
}

double RadialDensity::tail_radius(int d, double eps) const {
  (void)d;
  switch (family) {
    case Family::Const:
      return kInf;
    case Family::ExpRadial:
      return (45.0 - std::log(eps > 0 ? eps : 1e-300)) / rate;
    case Family::Gaussian:
      return std::sqrt((45.0 - std::log(eps > 0 ? eps : 1e-300)) / rate);
  }
  return kInf;
}

MeasureSpec MeasureSpec::lebesgue(Domain domain) {
  MeasureSpec m;
  m.kind_ = MeasureKind::Lebesgue;
  m.dim_ = domain.dimension();
  m.domain_ = std::make_shared<Domain>(std::move(domain));
  return m;
}

MeasureSpec MeasureSpec::density(Domain domain, RadialDensity g) {
  MeasureSpec m;
  m.kind_ = MeasureKind::Density;
  m.dim_ = domain.dimension();
  m.domain_ = std::make_shared<Domain>(std::move(domain));
  m.density_ = std::move(g);
  return m;
}

MeasureSpec MeasureSpec::sphere_surface(std::vector<double> center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("sphere_surface: radius must be positive");
  MeasureSpec m;
  m.kind_ = MeasureKind::SphereSurface;
  m.dim_ = static_cast<int>(center.size());
  m.center_ = std::move(center);
  m.radius_ = radius;
  return m;
}

MeasureSpec MeasureSpec::atoms(std::vector<std::vector<double>> points,
                               std::vector<double> masses) {
  if (points.size() != masses.size())
    throw std::invalid_argument("atoms: points/masses size mismatch");
  for (double w : masses)
    if (w < 0.0) throw std::invalid_argument("atoms: negative mass");
  MeasureSpec m;
  m.kind_ = MeasureKind::Atoms;
  m.dim_ = points.empty() ? 1 : static_cast<int>(points.front().size());
  m.points_ = std::move(points);
  m.masses_ = std::move(masses);
  return m;
}

MeasureSpec MeasureSpec::mixture(std::vector<double> weights,
                                 std::vector<MeasureSpec> parts) {
  if (weights.size() != parts.size())
    throw std::invalid_argument("mixture: weights/parts size mismatch");
  for (double w : weights)
    if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
  MeasureSpec m;
  m.kind_ = MeasureKind::Mixture;
  m.dim_ = parts.empty() ? 1 : parts.front().dimension();
  m.weights_ = std::move(weights);
  m.parts_ = std::move(parts);
  return m;
}

double MeasureSpec::total_mass() const {
  switch (kind_) {
    case MeasureKind::Lebesgue:
      return domain_->volume();
    case MeasureKind::Density: {
      const auto& g = density_;
      if (domain_->kind() == DomainKind::FullSpace && g.center.empty()) {
        const int d = dim_;
        switch (g.family) {
          case RadialDensity::Family::Const:
            return kInf;
          case RadialDensity::Family::ExpRadial:
            return g.scale * num::unit_sphere_area(d) * std::tgamma(d) /
                   std::pow(g.rate, d);
          case RadialDensity::Family::Gaussian:
            return g.scale * std::pow(kPi / g.rate, 0.5 * d);
        }
      }
      Integrand one;
      one.f = [](const double*) { return 1.0; };
      auto r = integrate(*this, one, Region::all());
      return r.value;
    }
    case MeasureKind::SphereSurface:
      return num::sphere_area(dim_, radius_);
    case MeasureKind::Atoms: {
      double s = 0.0;
      for (double w : masses_) s += w;
      return s;
    }
    case MeasureKind::Mixture: {
      double s = 0.0;
      for (size_t i = 0; i < parts_.size(); ++i) s += weights_[i] * parts_[i].total_mass();
      return s;
    }
  }
  return 0.0;
}

bool MeasureSpec::compact_support() const { return std::isfinite(support_radius()); }

double MeasureSpec::support_radius() const {
  switch (kind_) {
    case MeasureKind::Lebesgue:
      return domain_->bounded() ? domain_->circumradius() : kInf;
    case MeasureKind::Density: {
      const double dr = domain_->bounded() ? domain_->circumradius() : kInf;
      return dr;  // decaying densities still have full support
    }
    case MeasureKind::SphereSurface:
      return norm(center_.data(), dim_) + radius_;
    case MeasureKind::Atoms: {
      double m = 0.0;
      for (const auto& p : points_) m = std::max(m, norm(p.data(), dim_));
      return m;
    }
    case MeasureKind::Mixture: {
      double m = 0.0;
      for (const auto& p : parts_) m = std::max(m, p.support_radius());
      return m;
    }
  }
  return kInf;
}

Region Region::ball(std::vector<double> c, double r) {
  Region reg;
  reg.kind = Kind::Ball;
  reg.center = std::move(c);
  reg.radius = r;
  return reg;
}

Region Region::outside(std::vector<double> c, double r) {
  Region reg;
  reg.kind = Kind::Outside;
  reg.center = std::move(c);
  reg.radius = r;
  return reg;
}

bool Region::contains(const double* y, int d) const {
  switch (kind) {
    case Kind::All:
      return true;
    case Kind::Ball:
      return distance(y, center.data(), d) < radius;
    case Kind::Outside:
      return distance(y, center.data(), d) >= radius;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ball_mass

ExtReal ball_mass(const MeasureSpec& mu, const std::vector<double>& x, double r) {
  const int d = mu.dimension();
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("ball_mass: dimension mismatch");
  if (r <= 0.0) throw std::invalid_argument("ball_mass: radius must be positive");

  switch (mu.kind()) {
    case MeasureKind::Atoms: {
      ExtReal e;
      for (size_t i = 0; i < mu.points().size(); ++i)
        if (distance(mu.points()[i].data(), x.data(), d) < r) e.value += mu.masses()[i];
      return e;
    }
    case MeasureKind::SphereSurface: {
      const double rho = distance(x.data(), mu.center().data(), d);
      ExtReal e;
      e.value = num::sphere_area(d, mu.radius()) *
                num::sphere_in_ball_fraction(d, rho, mu.radius(), r);
      return e;
    }
    case MeasureKind::Mixture: {
      ExtReal e;
      for (size_t i = 0; i < mu.parts().size(); ++i)
        e = add(e, scale(ball_mass(mu.parts()[i], x, r), mu.weights()[i]));
      return e;
    }
    case MeasureKind::Lebesgue: {
      const Domain& D = mu.domain();
      const double area = num::unit_sphere_area(d);
      num::QuadOptions o;
      o.rel_tol = 1e-9;
      switch (D.kind()) {
        case DomainKind::FullSpace: {
          ExtReal e;
          e.value = num::ball_volume(d, r);
          return e;
        }
        case DomainKind::Ball: {
          const double rho = distance(x.data(), D.center().data(), d);
          const double R = D.radius();
          auto f = [&](double s) {
            return std::pow(s, d - 1) * num::sphere_in_ball_fraction(d, rho, s, R);
          };
          return from_quad([&] {
            auto q = num::integrate(f, 0.0, r, o);
            q.value *= area;
            q.error *= area;
            return q;
          }());
        }
        case DomainKind::Strip: {
          const int ax = D.axis();
          const double w2 = 0.5 * D.width();
          auto f = [&](double s) {
            const double lo = (-w2 - x[ax]) / s;
            const double hi = (w2 - x[ax]) / s;
            return std::pow(s, d - 1) * num::band_fraction(d, lo, hi);
          };
          return from_quad([&] {
            auto q = num::integrate(f, 0.0, r, o);
            q.value *= area;
            q.error *= area;
            return q;
          }());
        }
        default:
          break;
      }
      // generic: cubature over the ball's bounding box clipped to the domain
      std::vector<double> lo(d), hi(d), dlo, dhi;
      D.bounding_box(dlo, dhi);
      for (int i = 0; i < d; ++i) {
        lo[i] = std::max(x[i] - r, dlo[i]);
        hi[i] = std::min(x[i] + r, dhi[i]);
      }
      D.refine_box(lo, hi);
      for (int i = 0; i < d; ++i)
        if (!(lo[i] < hi[i])) return {};
      auto f = [&](const double* y) {
        return (distance(y, x.data(), d) < r && D.contains(y, d)) ? 1.0 : 0.0;
      };
      num::CubOptions co;
      co.rel_tol = 1e-6;
      double boxv = 1.0;
      for (int i = 0; i < d; ++i) boxv *= hi[i] - lo[i];
      co.abs_tol = 1e-10 * boxv;
      return from_quad(num::integrate_box(f, lo, hi, co));
    }
    case MeasureKind::Density: {
      const Domain& D = mu.domain();
      std::vector<double> lo(d), hi(d), dlo, dhi;
      D.bounding_box(dlo, dhi);
      for (int i = 0; i < d; ++i) {
        lo[i] = std::max(x[i] - r, dlo[i]);
        hi[i] = std::min(x[i] + r, dhi[i]);
      }
      D.refine_box(lo, hi);
      for (int i = 0; i < d; ++i)
        if (!(lo[i] < hi[i])) return {};
      const auto& g = mu.density_fn();
      auto f = [&](const double* y) {
        return (distance(y, x.data(), d) < r && D.contains(y, d)) ? g(y, d) : 0.0;
      };
      num::CubOptions co;
      co.rel_tol = 1e-7;
      return from_quad(num::integrate_box(f, lo, hi, co));
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// integrate

// Average of fn over the sphere of radius s around c. d <= 3.
double angular_average(int d, const std::vector<double>& c, double s,
                       const std::function<double(const double*)>& fn, double* err) {
  if (err) *err = 0.0;
  if (d == 1) {
    double y0 = c[0] - s, y1 = c[0] + s;
    return 0.5 * (fn(&y0) + fn(&y1));
  }
  if (d == 2) {
    auto f = [&](double th) {
      double y[2] = {c[0] + s * std::cos(th), c[1] + s * std::sin(th)};
      return fn(y);
    };
    num::QuadOptions o;
    o.rel_tol = 1e-8;
    o.max_intervals = 600;
    auto q = num::integrate(f, 0.0, 2.0 * kPi, o);
    if (err) *err = q.error / (2.0 * kPi);
    return q.value / (2.0 * kPi);
  }
  // d == 3: Gauss-Legendre in cos(theta) times uniform azimuth, at two
  // resolutions; the difference is the error estimate
  auto eval = [&](int nc, int nph) {
    const auto& gl = num::gauss_legendre(nc);
    double sum = 0.0;
    for (int i = 0; i < nc; ++i) {
      const double ct = gl.nodes[i];
      const double st = std::sqrt(std::max(1.0 - ct * ct, 0.0));
      double inner = 0.0;
      for (int j = 0; j < nph; ++j) {
        const double ph = 2.0 * kPi * j / nph;
        double y[3] = {c[0] + s * st * std::cos(ph), c[1] + s * st * std::sin(ph),
                       c[2] + s * ct};
        inner += fn(y);
      }
      sum += gl.weights[i] * inner / nph;
    }
    return 0.5 * sum;
  };
  const double coarse = eval(24, 48);
  const double fine = eval(48, 96);
  if (err) *err = std::abs(fine - coarse);
  return fine;
}

namespace {

ExtReal integrate_sphere_measure(const MeasureSpec& mu, const Integrand& fi,
                                 const Region& region) {
  const int d = mu.dimension();
  const auto& c = mu.center();
  const double R = mu.radius();
  auto fn = [&](const double* y) {
    return region.contains(y, d) ? fi.f(y) : 0.0;
  };
  double err = 0.0;
  const double avg = angular_average(d, c, R, fn, &err);
  ExtReal e;
  e.value = avg * num::sphere_area(d, R);
  e.error = err * num::sphere_area(d, R);
  if (fi.singular_point) {
    // flag a non-integrable hit of the singular point on the sphere
    const double rho = distance(fi.singular_point->data(), c.data(), d);
    if (std::abs(rho - R) < 1e-12 && fi.singular_order >= d - 1) return ExtReal::inf();
  }
  return e;
}

}  // namespace

ExtReal integrate(const MeasureSpec& mu, const Integrand& fi, const Region& region) {
  const int d = mu.dimension();
  switch (mu.kind()) {
    case MeasureKind::Atoms: {
      ExtReal e;
      for (size_t i = 0; i < mu.points().size(); ++i) {
        const auto& p = mu.points()[i];
        if (!region.contains(p.data(), d)) continue;
        if (fi.singular_point && distance(p.data(), fi.singular_point->data(), d) == 0.0 &&
            fi.singular_order > 0.0)
          return ExtReal::inf();
        e.value += mu.masses()[i] * fi.f(p.data());
      }
      return e;
    }
    case MeasureKind::SphereSurface:
      return integrate_sphere_measure(mu, fi, region);
    case MeasureKind::Mixture: {
      ExtReal e;
      for (size_t i = 0; i < mu.parts().size(); ++i)
        e = add(e, scale(integrate(mu.parts()[i], fi, region), mu.weights()[i]));
      return e;
    }
    case MeasureKind::Lebesgue:
    case MeasureKind::Density: {
      const Domain& D = mu.domain();
      const bool weighted = mu.kind() == MeasureKind::Density;
      const auto& g = mu.density_fn();

      if (fi.singular_point && (d - 1 - fi.singular_order) > -1.0) {
        // polar reduction around the declared singular point
        const auto& z = *fi.singular_point;
        const double gamma = d - 1 - fi.singular_order;
        double rmax;
        if (region.kind == Region::Kind::Ball)
          rmax = region.radius + distance(region.center.data(), z.data(), d);
        else if (D.bounded())
          rmax = D.circumradius() + norm(z.data(), d);
        else if (weighted && std::isfinite(g.tail_radius(d, 1e-14)))
          rmax = g.tail_radius(d, 1e-14) + norm(z.data(), d);
        else
          return {0.0, 0.0, num::QuadStatus::Inconclusive};

        auto shell = [&](double s) {
          if (s <= 0.0) return 0.0;
          auto fn = [&](const double* y) {
            if (!region.contains(y, d) || !D.contains(y, d)) return 0.0;
            double v = fi.f(y);
            if (weighted) v *= g(y, d);
            // divide out the declared singular factor; reapplied in the weight
            return v * std::pow(distance(y, z.data(), d), fi.singular_order);
          };
          return angular_average(d, z, s, fn, nullptr);
        };
        auto q = num::integrate_power_weighted(shell, gamma, rmax);
        q.value *= num::unit_sphere_area(d);
        q.error *= num::unit_sphere_area(d);
        return from_quad(q);
      }
      if (fi.singular_point && (d - 1 - fi.singular_order) <= -1.0 &&
          D.contains(fi.singular_point->data(), d) &&
          (region.kind == Region::Kind::All ||
           region.contains(fi.singular_point->data(), d)))
        return ExtReal::inf();  // non-integrable singularity inside the support

      // plain cubature over a finite box
      std::vector<double> lo, hi;
      D.bounding_box(lo, hi);
      if (region.kind == Region::Kind::Ball) {
        for (int i = 0; i < d; ++i) {
          lo[i] = std::max(lo[i], region.center[i] - region.radius);
          hi[i] = std::min(hi[i], region.center[i] + region.radius);
        }
      }
      for (int i = 0; i < d; ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
          if (weighted) {
            const double tr = g.tail_radius(d, 1e-14);
            const double gc = g.center.empty() ? 0.0 : g.center[i];
            if (std::isfinite(tr)) {
              lo[i] = std::max(lo[i], gc - tr);
              hi[i] = std::min(hi[i], gc + tr);
              continue;
            }
          }
          return {0.0, 0.0, num::QuadStatus::Inconclusive};
        }
      }
      for (int i = 0; i < d; ++i)
        if (!(lo[i] < hi[i])) return {};
      auto f = [&](const double* y) {
        if (!region.contains(y, d) || !D.contains(y, d)) return 0.0;
        double v = fi.f(y);
        if (weighted) v *= g(y, d);
        return v;
      };
      num::CubOptions co;
      co.rel_tol = 1e-7;
      return from_quad(num::integrate_box(f, lo, hi, co));
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// sample

std::vector<WeightedPoint> sample(const MeasureSpec& mu, long n, num::RngStream& stream,
                                  const std::optional<Domain>& envelope) {
  const int d = mu.dimension();
  std::vector<WeightedPoint> out;
  out.reserve(n);
  switch (mu.kind()) {
    case MeasureKind::Atoms: {
      double total = 0.0;
      for (double w : mu.masses()) total += w;
      if (total <= 0.0) throw std::invalid_argument("sample: zero-mass atoms");
      for (long i = 0; i < n; ++i) {
        double u = stream.uniform() * total;
        size_t k = 0;
        for (; k + 1 < mu.masses().size(); ++k) {
          if (u < mu.masses()[k]) break;
          u -= mu.masses()[k];
        }
        out.push_back({mu.points()[k], 1.0});
      }
      return out;
    }
    case MeasureKind::SphereSurface: {
      for (long i = 0; i < n; ++i) {
        std::vector<double> y(d);
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
          y[k] = stream.normal();
          s += y[k] * y[k];
        }
        s = std::sqrt(s);
        for (int k = 0; k < d; ++k) y[k] = mu.center()[k] + mu.radius() * y[k] / s;
        out.push_back({std::move(y), 1.0});
      }
      return out;
    }
    case MeasureKind::Mixture: {
      std::vector<double> cum;
      double total = 0.0;
      for (size_t i = 0; i < mu.parts().size(); ++i) {
        const double m = mu.weights()[i] * mu.parts()[i].total_mass();
        if (std::isinf(m) && !envelope)
          throw std::invalid_argument("sample: infinite mass mixture without envelope");
        total += m;
        cum.push_back(total);
      }
      for (long i = 0; i < n; ++i) {
        const double u = stream.uniform() * total;
        size_t k = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
        if (k >= mu.parts().size()) k = mu.parts().size() - 1;
        auto sub = sample(mu.parts()[k], 1, stream, envelope);
        out.push_back(std::move(sub.front()));
      }
      return out;
    }
    case MeasureKind::Lebesgue:
    case MeasureKind::Density: {
      const Domain& D = mu.domain();
      const bool weighted = mu.kind() == MeasureKind::Density;
      std::vector<double> lo, hi;
      D.bounding_box(lo, hi);
      if (envelope) {
        std::vector<double> elo, ehi;
        envelope->bounding_box(elo, ehi);
        lo = clip_box_lo(lo, elo);
        hi = clip_box_hi(hi, ehi);
      }
      for (int i = 0; i < d; ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
          if (weighted) {
            const double tr = mu.density_fn().tail_radius(d, 1e-14);
            const double gc =
                mu.density_fn().center.empty() ? 0.0 : mu.density_fn().center[i];
            if (std::isfinite(tr)) {
              lo[i] = std::max(lo[i], gc - tr);
              hi[i] = std::min(hi[i], gc + tr);
              continue;
            }
          }
          throw std::invalid_argument("sample: infinite mass measure without envelope");
        }
      }
      const double gmax = weighted ? mu.density_fn().sup() : 1.0;
      long guard = 0;
      while (static_cast<long>(out.size()) < n) {
        std::vector<double> y(d);
        for (int k = 0; k < d; ++k) y[k] = stream.uniform(lo[k], hi[k]);
        if (!D.contains(y.data(), d) || (envelope && !envelope->contains(y.data(), d))) {
          if (++guard > 1000000L + 10000L * n)
            throw std::runtime_error("sample: rejection stalled (domain too thin?)");
          continue;
        }
        if (weighted) {
          const double g = mu.density_fn()(y.data(), d);
          if (stream.uniform() * gmax > g) {
            if (++guard > 1000000L + 10000L * n)
              throw std::runtime_error("sample: rejection stalled");
            continue;
          }
        }
        out.push_back({std::move(y), 1.0});
      }
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// b0_profile

DecayProfile b0_profile(const Domain& D, const std::vector<double>& radii,
                        const B0Options& opts) {
  DecayProfile prof;
  prof.direction = LimitDirection::TowardInfinity;
  prof.label = "b0";
  if (D.bounded()) {
    prof.verdict = Verdict::In;
    prof.abscissae = radii;
    prof.values.assign(radii.size(), 0.0);
    // honest values: zero once R exceeds circumradius + probe
    const double cr = D.circumradius();
    auto mu = MeasureSpec::lebesgue(D);
    for (size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] <= cr + opts.probe_radius) {
        std::vector<double> x(D.dimension(), 0.0);
        x[0] = radii[i];
        prof.values[i] = ball_mass(mu, x, opts.probe_radius).value;
      }
    }
    prof.fit = fit_loglog(prof);
    return prof;
  }

  const int d = D.dimension();
  auto mu = MeasureSpec::lebesgue(D);
  auto rng = num::RngStream::root(0x62305eedULL);

  auto eval_at = [&](const std::vector<double>& dir, double R) {
    std::vector<double> x(d);
    for (int k = 0; k < d; ++k) x[k] = R * dir[k];
    return ball_mass(mu, x, opts.probe_radius).value;
  };

  const int nstart = opts.starts_per_dim * d;
  for (double R : radii) {
    // structured starts: axes, then low-discrepancy directions
    std::vector<std::vector<double>> dirs;
    for (int k = 0; k < d; ++k) {
      std::vector<double> e(d, 0.0);
      e[k] = 1.0;
      dirs.push_back(e);
      e[k] = -1.0;
      dirs.push_back(e);
    }
    while (static_cast<int>(dirs.size()) < nstart) {
      std::vector<double> v(d);
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        v[k] = rng.normal();
        s += v[k] * v[k];
      }
      s = std::sqrt(s);
      for (int k = 0; k < d; ++k) v[k] /= s;
      dirs.push_back(std::move(v));
    }
    double best = 0.0;
    std::vector<double> bestdir = dirs.front();
    for (const auto& dir : dirs) {
      const double v = eval_at(dir, R);
      if (v > best) {
        best = v;
        bestdir = dir;
      }
    }
    // hill climb on the sphere with shrinking tangent steps
    double step = 0.5;
    for (int it = 0; it < 40; ++it) {
      bool improved = false;
      for (int trial = 0; trial < 2 * d; ++trial) {
        std::vector<double> cand(d);
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
          cand[k] = bestdir[k] + step * rng.normal();
          s += cand[k] * cand[k];
        }
        s = std::sqrt(s);
        for (int k = 0; k < d; ++k) cand[k] /= s;
        const double v = eval_at(cand, R);
        if (v > best) {
          best = v;
          bestdir = cand;
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
      if (step < 1e-4) break;
    }
    prof.abscissae.push_back(R);
    prof.values.push_back(best);
  }
  finalize_profile(prof, opts.rule);
  return prof;
}

}  // namespace ptk::geometry
