#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ptk/decay.hpp"
#include "ptk/geometry.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/rng.hpp"

namespace ptk::geometry {

// Extended-real numerical result: +inf is a value, not an error.
struct ExtReal {
  double value = 0.0;
  double error = 0.0;
  num::QuadStatus status = num::QuadStatus::Converged;

  bool infinite() const { return std::isinf(value); }
  bool ok() const { return status != num::QuadStatus::Inconclusive; }
  static ExtReal inf() {
    return {std::numeric_limits<double>::infinity(), 0.0, num::QuadStatus::Divergent};
  }
};

// Catalogued density weights g(y); all radial about a center, which keeps
// them serializable and gives the integrators exact tail bounds.
struct RadialDensity {
  enum class Family { Const, ExpRadial, Gaussian };
  Family family = Family::Const;
  double scale = 1.0;
  double rate = 1.0;
  std::vector<double> center;  // empty = origin

  double radial(double r) const;
  double operator()(const double* y, int d) const;
  double sup() const { return scale; }
  // radius beyond which the mass tail is below `eps` relative to scale
  double tail_radius(int d, double eps) const;
};

enum class MeasureKind { Lebesgue, Density, SphereSurface, Atoms, Mixture };

class MeasureSpec {
 public:
  static MeasureSpec lebesgue(Domain domain);
  static MeasureSpec density(Domain domain, RadialDensity g);
  static MeasureSpec sphere_surface(std::vector<double> center, double radius);
  static MeasureSpec atoms(std::vector<std::vector<double>> points,
                           std::vector<double> masses);
  static MeasureSpec mixture(std::vector<double> weights, std::vector<MeasureSpec> parts);

  MeasureKind kind() const { return kind_; }
  int dimension() const { return dim_; }

  const Domain& domain() const { return *domain_; }
  const RadialDensity& density_fn() const { return density_; }
  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<MeasureSpec>& parts() const { return parts_; }

  std::optional<double> total_mass_hint;

  double total_mass() const;  // may be +inf
  // true when the measure has bounded support; circumradius then finite
  bool compact_support() const;
  double support_radius() const;  // +inf if unbounded support

 private:
  MeasureSpec() = default;
  MeasureKind kind_ = MeasureKind::Lebesgue;
  int dim_ = 1;
  std::shared_ptr<const Domain> domain_;
  RadialDensity density_;
  std::vector<double> center_;
  double radius_ = 0.0;
  std::vector<std::vector<double>> points_;
  std::vector<double> masses_;
  std::vector<double> weights_;
  std::vector<MeasureSpec> parts_;
};

// Integration region: everything the potential machinery needs reduces to
// balls, complements of balls and their combinations.
struct Region {
  enum class Kind { All, Ball, Outside };
  Kind kind = Kind::All;
  std::vector<double> center;
  double radius = 0.0;

  static Region all() { return {}; }
  static Region ball(std::vector<double> c, double r);
  static Region outside(std::vector<double> c, double r);
  bool contains(const double* y, int d) const;
};

struct Integrand {
  std::function<double(const double*)> f;
  // declared singularity: f ~ |y - point|^{-order} near the point
  std::optional<std::vector<double>> singular_point;
  double singular_order = 0.0;
};

ExtReal ball_mass(const MeasureSpec& mu, const std::vector<double>& x, double r);

ExtReal integrate(const MeasureSpec& mu, const Integrand& f, const Region& region);

struct WeightedPoint {
  std::vector<double> point;
  double weight;
};

// Average of fn over the sphere of radius s around c (d <= 3); err optional.
double angular_average(int d, const std::vector<double>& c, double s,
                       const std::function<double(const double*)>& fn, double* err);

// Self-normalized sample of mu (restricted to `envelope` when the measure
// itself has infinite mass). Throws on infinite mass without envelope.
std::vector<WeightedPoint> sample(const MeasureSpec& mu, long n, num::RngStream& stream,
                                  const std::optional<Domain>& envelope = {});

struct B0Options {
  double probe_radius = 1.0;
  int starts_per_dim = 64;  // multistart count is starts_per_dim * d
  DecayRule rule;
};

// sup_{|x|=R} m(D cap B_1(x)) over the given R ladder, with the
// limit-to-zero verdict. Bounded domains short circuit to IN.
DecayProfile b0_profile(const Domain& D, const std::vector<double>& radii,
                        const B0Options& opts = {});

}  // namespace ptk::geometry
