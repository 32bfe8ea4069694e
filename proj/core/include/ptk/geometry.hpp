#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptk::geometry {

enum class DomainKind { FullSpace, Ball, Box, Strip, Horn, Union, Intersection };

// Catalogued horn cross-section profiles (serializable, unlike raw callables).
struct HornProfile {
  enum class Family { Exp, Power };
  Family family = Family::Exp;
  double rate = 1.0;

  // half-width of the cross-section at axial coordinate x1
  double operator()(double x1) const;
  // largest half-width over [a,b]
  double max_on(double a, double b) const;
};

// Open region of R^d. Membership uses the open-set convention: boundary
// points are excluded.
class Domain {
 public:
  static Domain full_space(int d);
  static Domain ball(std::vector<double> center, double radius);
  static Domain box(std::vector<double> lo, std::vector<double> hi);
  // strip {x : |x_axis| < width/2}; axis is 0-based, defaults to the last one
  static Domain strip(int d, double width, int axis = -1);
  // horn {x : x_1 > x1_min, |x_perp| < profile(x_1)}
  static Domain horn(int d, HornProfile profile, double x1_min = 0.0);
  static Domain union_of(std::vector<Domain> parts);
  static Domain intersection_of(std::vector<Domain> parts);

  DomainKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  bool bounded() const { return bounded_; }
  bool regular_hint() const { return regular_hint_; }
  void set_regular_hint(bool v) { regular_hint_ = v; }

  // finite iff bounded
  double circumradius() const;

  bool contains(const double* x, int n) const;
  bool contains(const std::vector<double>& x) const {
    return contains(x.data(), static_cast<int>(x.size()));
  }

  // axis-aligned bounding box; +-inf entries on unbounded directions
  void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const;

  // tighten a candidate box using cross-constraints (horn width given the
  // axial range); integrators call this before cubature on thin domains
  void refine_box(std::vector<double>& lo, std::vector<double>& hi) const;

  // Lebesgue volume; +inf when infinite. Exact for ball/box/full/strip,
  // 1-d quadrature for horns, cubature fallback for composites.
  double volume() const;

  // distance from an interior point to the boundary (0 outside);
  // exact for primitives, conservative for composites
  double boundary_distance(const double* x, int n) const;

  // accessors (valid for the matching kind)
  const std::vector<double>& center() const { return a_; }
  double radius() const { return r_; }
  const std::vector<double>& lo() const { return a_; }
  const std::vector<double>& hi() const { return b_; }
  int axis() const { return axis_; }
  double width() const { return r_; }
  const HornProfile& profile() const { return profile_; }
  double horn_x1_min() const { return x1_min_; }
  const std::vector<Domain>& children() const { return children_; }

 private:
  Domain() = default;
  void finish();

  DomainKind kind_ = DomainKind::FullSpace;
  int dim_ = 1;
  bool bounded_ = false;
  bool regular_hint_ = true;
  std::vector<double> a_, b_;  // center / lo, (unused) / hi
  double r_ = 0.0;             // radius or strip width
  int axis_ = 0;
  HornProfile profile_;
  double x1_min_ = 0.0;
  std::vector<Domain> children_;
};

double distance(const double* x, const double* y, int n);
double norm(const double* x, int n);

}  // namespace ptk::geometry
