#include "ptk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptk/cubature.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/special.hpp"

namespace ptk::geometry {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double distance(const double* x, const double* y, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double norm(const double* x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double HornProfile::operator()(double x1) const {
  switch (family) {
    case Family::Exp:
      return std::exp(-rate * x1);
    case Family::Power:
      return std::pow(1.0 + std::max(x1, 0.0), -rate);
  }
  return 0.0;
}

double HornProfile::max_on(double a, double b) const {
  (void)b;  // both families are nonincreasing
  return (*this)(a);
}

Domain Domain::full_space(int d) {
  Domain dom;
  dom.kind_ = DomainKind::FullSpace;
  dom.dim_ = d;
  dom.finish();
  return dom;
}

Domain Domain::ball(std::vector<double> center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
  Domain dom;
  dom.kind_ = DomainKind::Ball;
  dom.dim_ = static_cast<int>(center.size());
  dom.a_ = std::move(center);
  dom.r_ = radius;
  dom.finish();
  return dom;
}

Domain Domain::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box: lo/hi size mismatch");
  for (size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box: needs lo < hi per axis");
  Domain dom;
  dom.kind_ = DomainKind::Box;
  dom.dim_ = static_cast<int>(lo.size());
  dom.a_ = std::move(lo);
  dom.b_ = std::move(hi);
  dom.finish();
  return dom;
}

Domain Domain::strip(int d, double width, int axis) {
  if (width <= 0.0) throw std::invalid_argument("strip: width must be positive");
  Domain dom;
  dom.kind_ = DomainKind::Strip;
  dom.dim_ = d;
  dom.r_ = width;
  dom.axis_ = axis < 0 ? d - 1 : axis;
  if (dom.axis_ >= d) throw std::invalid_argument("strip: axis out of range");
  dom.finish();
  return dom;
}

Domain Domain::horn(int d, HornProfile profile, double x1_min) {
  if (d < 2) throw std::invalid_argument("horn: needs d >= 2");
  Domain dom;
  dom.kind_ = DomainKind::Horn;
  dom.dim_ = d;
  dom.profile_ = profile;
  dom.x1_min_ = x1_min;
  dom.finish();
  return dom;
}

Domain Domain::union_of(std::vector<Domain> parts) {
  if (parts.empty()) throw std::invalid_argument("union: empty");
  Domain dom;
  dom.kind_ = DomainKind::Union;
  dom.dim_ = parts.front().dimension();
  for (const auto& p : parts)
    if (p.dimension() != dom.dim_) throw std::invalid_argument("union: dimension mismatch");
  dom.children_ = std::move(parts);
  dom.finish();
  return dom;
}

Domain Domain::intersection_of(std::vector<Domain> parts) {
  if (parts.empty()) throw std::invalid_argument("intersection: empty");
  Domain dom;
  dom.kind_ = DomainKind::Intersection;
  dom.dim_ = parts.front().dimension();
  for (const auto& p : parts)
    if (p.dimension() != dom.dim_)
      throw std::invalid_argument("intersection: dimension mismatch");
  dom.children_ = std::move(parts);
  dom.finish();
  return dom;
}

void Domain::finish() {
  switch (kind_) {
    case DomainKind::FullSpace:
    case DomainKind::Strip:
    case DomainKind::Horn:
      bounded_ = false;
      break;
    case DomainKind::Ball:
    case DomainKind::Box:
      bounded_ = true;
      break;
    case DomainKind::Union: {
      bounded_ = true;
      for (const auto& c : children_) bounded_ = bounded_ && c.bounded();
      break;
    }
    case DomainKind::Intersection: {
      bounded_ = false;
      for (const auto& c : children_) bounded_ = bounded_ || c.bounded();
      break;
    }
  }
}

double Domain::circumradius() const {
  switch (kind_) {
    case DomainKind::Ball:
      return norm(a_.data(), dim_) + r_;
    case DomainKind::Box: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += std::max(a_[i] * a_[i], b_[i] * b_[i]);
      return std::sqrt(s);
    }
    case DomainKind::Union: {
      double m = 0.0;
      for (const auto& c : children_) m = std::max(m, c.circumradius());
      return m;
    }
    case DomainKind::Intersection: {
      double m = kInf;
      for (const auto& c : children_)
        if (c.bounded()) m = std::min(m, c.circumradius());
      return m;
    }
    default:
      return kInf;
  }
}

bool Domain::contains(const double* x, int n) const {
  if (n != dim_) throw std::invalid_argument("membership: dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  if (bounded_) {
    // fast reject outside the circumradius
    const double cr = circumradius();
    if (norm(x, n) > cr + 1e-12 * (1.0 + cr)) return false;
  }
  switch (kind_) {
    case DomainKind::FullSpace:
      return true;
    case DomainKind::Ball:
      return distance(x, a_.data(), n) < r_;
    case DomainKind::Box: {
      for (int i = 0; i < n; ++i)
        if (!(a_[i] < x[i] && x[i] < b_[i])) return false;
      return true;
    }
    case DomainKind::Strip:
      return std::abs(x[axis_]) < 0.5 * r_;
    case DomainKind::Horn: {
      if (!(x[0] > x1_min_)) return false;
      double s = 0.0;
      for (int i = 1; i < n; ++i) s += x[i] * x[i];
      return std::sqrt(s) < profile_(x[0]);
    }
    case DomainKind::Union: {
      for (const auto& c : children_)
        if (c.contains(x, n)) return true;
      return false;
    }
    case DomainKind::Intersection: {
      for (const auto& c : children_)
        if (!c.contains(x, n)) return false;
      return true;
    }
  }
  return false;
}

void Domain::bounding_box(std::vector<double>& lo, std::vector<double>& hi) const {
  lo.assign(dim_, -kInf);
  hi.assign(dim_, kInf);
  switch (kind_) {
    case DomainKind::Ball:
      for (int i = 0; i < dim_; ++i) {
        lo[i] = a_[i] - r_;
        hi[i] = a_[i] + r_;
      }
      break;
    case DomainKind::Box:
      lo = a_;
      hi = b_;
      break;
    case DomainKind::Strip:
      lo[axis_] = -0.5 * r_;
      hi[axis_] = 0.5 * r_;
      break;
    case DomainKind::Horn: {
      lo[0] = x1_min_;
      const double wmax = profile_.max_on(x1_min_, kInf);
      for (int i = 1; i < dim_; ++i) {
        lo[i] = -wmax;
        hi[i] = wmax;
      }
      break;
    }
    case DomainKind::Union: {
      std::vector<double> l, h;
      lo.assign(dim_, kInf);
      hi.assign(dim_, -kInf);
      for (const auto& c : children_) {
        c.bounding_box(l, h);
        for (int i = 0; i < dim_; ++i) {
          lo[i] = std::min(lo[i], l[i]);
          hi[i] = std::max(hi[i], h[i]);
        }
      }
      break;
    }
    case DomainKind::Intersection: {
      std::vector<double> l, h;
      for (const auto& c : children_) {
        c.bounding_box(l, h);
        for (int i = 0; i < dim_; ++i) {
          lo[i] = std::max(lo[i], l[i]);
          hi[i] = std::min(hi[i], h[i]);
        }
      }
      break;
    }
    default:
      break;
  }
}

void Domain::refine_box(std::vector<double>& lo, std::vector<double>& hi) const {
  switch (kind_) {
    case DomainKind::Horn: {
      lo[0] = std::max(lo[0], x1_min_);
      const double w = profile_.max_on(lo[0], hi[0]);
      for (int i = 1; i < dim_; ++i) {
        lo[i] = std::max(lo[i], -w);
        hi[i] = std::min(hi[i], w);
      }
      break;
    }
    case DomainKind::Intersection:
      for (const auto& c : children_) c.refine_box(lo, hi);
      break;
    default:
      break;
  }
}

double Domain::volume() const {
  switch (kind_) {
    case DomainKind::FullSpace:
    case DomainKind::Strip:
      return kInf;
    case DomainKind::Ball:
      return num::ball_volume(dim_, r_);
    case DomainKind::Box: {
      double v = 1.0;
      for (int i = 0; i < dim_; ++i) v *= b_[i] - a_[i];
      return v;
    }
    case DomainKind::Horn: {
      const double vperp = num::unit_ball_volume(dim_ - 1);
      auto f = [&](double s) { return vperp * std::pow(profile_(s), dim_ - 1); };
      auto q = num::integrate_half_line(f, x1_min_);
      return q.ok() ? q.value : kInf;
    }
    default: {
      std::vector<double> lo, hi;
      bounding_box(lo, hi);
      for (int i = 0; i < dim_; ++i)
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return kInf;
      auto f = [this](const double* x) { return contains(x, dim_) ? 1.0 : 0.0; };
      num::CubOptions o;
      o.rel_tol = 1e-4;
      return num::integrate_box(f, lo, hi, o).value;
    }
  }
}

double Domain::boundary_distance(const double* x, int n) const {
  if (!contains(x, n)) return 0.0;
  switch (kind_) {
    case DomainKind::FullSpace:
      return kInf;
    case DomainKind::Ball:
      return r_ - distance(x, a_.data(), n);
    case DomainKind::Box: {
      double m = kInf;
      for (int i = 0; i < n; ++i) m = std::min({m, x[i] - a_[i], b_[i] - x[i]});
      return m;
    }
    case DomainKind::Strip:
      return 0.5 * r_ - std::abs(x[axis_]);
    case DomainKind::Horn: {
      double s = 0.0;
      for (int i = 1; i < n; ++i) s += x[i] * x[i];
      // conservative: the profile is Lipschitz(rate) at most
      return std::min(x[0] - x1_min_, (profile_(x[0]) - std::sqrt(s)) /
                                          (1.0 + profile_.rate));
    }
    case DomainKind::Union: {
      double m = 0.0;
      for (const auto& c : children_) m = std::max(m, c.boundary_distance(x, n));
      return m;
    }
    case DomainKind::Intersection: {
      double m = kInf;
      for (const auto& c : children_) m = std::min(m, c.boundary_distance(x, n));
      return m;
    }
  }
  return 0.0;
}

}  // namespace ptk::geometry
