#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ptk/quadrature.hpp"

namespace ptk::kernels {

enum class ProcessKind { Brownian, Stable, Relativistic };

// Brownian clock is the 1/2-Laplacian one: p_t = (2*pi*t)^{-d/2} exp(-r^2/2t).
// Stable and relativistic processes have characteristic exponent
// (|xi|^2 + m^{2/alpha})^{alpha/2} - m, with m = 0 for the stable case.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::Brownian;
  int dim = 1;
  double alpha = 2.0;
  double mass = 0.0;

  static ProcessSpec brownian(int d);
  static ProcessSpec stable(double alpha, int d);
  static ProcessSpec relativistic(double alpha, double m, int d);

  bool transient() const;
  double char_exponent(double s) const;  // psi(|xi|)
  // beta in the reference kernel pairing (nu, beta) = (d, beta_scale)
  double beta_scale() const { return kind == ProcessKind::Brownian ? 2.0 : alpha; }
  std::string name() const;
};

enum class KernelMethod { ClosedForm, LaplaceQuadrature, FourierQuadrature };

struct KernelValue {
  double value = 0.0;
  double error_estimate = 0.0;
  KernelMethod method = KernelMethod::ClosedForm;
  num::QuadStatus status = num::QuadStatus::Converged;

  bool infinite() const { return std::isinf(value); }
};

struct EvalPolicy {
  bool prefer_closed_form = true;  // false forces the quadrature paths
};

// p_t(x,y) as a function of r = |x-y|
KernelValue heat_kernel_radial(const ProcessSpec& spec, double t, double r,
                               const EvalPolicy& policy = {});
KernelValue heat_kernel(const ProcessSpec& spec, double t, const std::vector<double>& x,
                        const std::vector<double>& y, const EvalPolicy& policy = {});

// q-order resolvent; q = 0 (Green kernel) requires transience
KernelValue resolvent_kernel_radial(const ProcessSpec& spec, double q, double r,
                                    const EvalPolicy& policy = {});
KernelValue resolvent_kernel(const ProcessSpec& spec, double q,
                             const std::vector<double>& x, const std::vector<double>& y,
                             const EvalPolicy& policy = {});

// Reference kernel G of the (nu, beta) Kato pairing:
// G(r) = r^{beta-nu} for nu > beta, log(1/r) for nu = beta (r < 1, else 0),
// and 1 for nu < beta (bounded branch).
KernelValue green_kernel_reference(double nu, double beta, double r);

// Green function of the absorbed 1/2-Laplacian on the interval (a,b)
double interval_green(double a, double b, double x, double y);

// I(r) = \int_0^inf s^{(d+alpha)/2-1} e^{-s/4 - r^2/s} ds and Psi = I(r)/I(0)
double psi_I(double r, int d, double alpha);
double psi_ratio(double r, int d, double alpha);

// Relativistic jump kernel J_m(x,y) at distance r, +inf at r = 0
double jump_kernel(double alpha, double m, int d, double r);
double jump_constant(int d, double alpha);  // A(d, -alpha)

struct EnvelopePair {
  double lower = 0.0;
  double upper = 0.0;
};

// Two-branch global heat kernel envelope for the relativistic process;
// (C1, C2) are caller parameters.
double phi_envelope(double alpha, double m, int d, double C, double t, double r);
EnvelopePair heat_envelope(double alpha, double m, int d, double t, double r, double C1,
                           double C2);

// catalogued on-diagonal bound sup_{x,y} p_t(x,y)
double ultracontractivity_bound(const ProcessSpec& spec, double t, double C2 = 1.0);

}  // namespace ptk::kernels
