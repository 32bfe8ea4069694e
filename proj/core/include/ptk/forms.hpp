#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ptk/decay.hpp"
#include "ptk/geometry.hpp"
#include "ptk/rng.hpp"

namespace ptk::forms {

// Uniform Cartesian lattice restricted to a domain; zero extension outside.
struct Grid {
  int dim = 1;
  double h = 0.1;
  std::vector<double> origin;        // lattice anchor per axis
  std::vector<int> shape;            // lattice extents per axis
  std::vector<int> node_of_cell;     // linear lattice index -> node id or -1
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;       // cell-clipped volumes

  int node_at(const std::vector<int>& idx) const;
  std::vector<double> coord(const std::vector<int>& idx) const;
};

// Truncation box for unbounded domains.
struct Truncation {
  std::vector<double> lo, hi;
};

Grid make_grid(const geometry::Domain& D, double h,
               const std::optional<Truncation>& trunc = {});

struct DiscreteForm {
  Grid grid;
  Eigen::SparseMatrix<double> stiffness;  // energy(u) = u^T A u
  bool dirichlet = true;
  bool nonlocal = false;

  double energy(const Eigen::VectorXd& u) const;
  // (sum w_i |u_i|^{2p})^{1/p} : the squared L^{2p} norm
  double l2p_norm_sq(const Eigen::VectorXd& u, double p) const;
  double mass_total() const;
  void dump(std::ostream& os) const;
};

// second-order stencil for the 1/2-Laplacian energy, Dirichlet outside
DiscreteForm assemble_local(const geometry::Domain& D, double h,
                            const std::optional<Truncation>& trunc = {});

struct NonlocalOptions {
  double truncation_radius = 5.0;
  bool dirichlet_exterior = false;
  int exact_offsets = 3;  // cell-pair quadrature within this lattice distance
};

// jump-kernel double-sum energy for the (relativistic) stable form
DiscreteForm assemble_nonlocal(double alpha, double m, const geometry::Domain& D,
                               double h, const std::optional<Truncation>& trunc = {},
                               const NonlocalOptions& opts = {});

struct SVReport {
  double potential_norm = 0.0;  // ||R^p mu||_inf used on the right-hand side
  double min_margin = 0.0;
  std::vector<double> margins;
  bool skipped = false;         // infinite potential norm
};

// margin_i = ||R^p mu||^{1/p} E(u_i,u_i) - ||u_i||^2_{L^{2p}}; the measure is
// the form's own mass weights. potential_norm, when not supplied, comes from
// the discrete Green kernel of the form itself.
SVReport stollmann_voigt_check(const DiscreteForm& form, double p,
                               const std::vector<Eigen::VectorXd>& us,
                               std::optional<double> potential_norm = {});

// ||R^p mu||_inf of the discrete form against its own mass weights
double discrete_green_potential_norm(const DiscreteForm& form, double p);

struct TightnessReport {
  std::vector<double> levels;
  std::vector<double> sup_tail;  // sup over the sampled energy ball
  Verdict verdict = Verdict::Inconclusive;
};

// sup over {E(u,u) <= M} of \int_{u^{2p} >= L} u^{2p} dm, by Gaussian
// sampling of the energy sphere plus energy-metric gradient ascent.
TightnessReport tightness_diagnostic(const DiscreteForm& form, double p, double M,
                                     const std::vector<double>& levels,
                                     std::uint64_t seed = 1, int samples = 512);

}  // namespace ptk::forms
