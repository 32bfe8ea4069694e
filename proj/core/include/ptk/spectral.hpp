#pragma once

#include <string>
#include <vector>

#include "ptk/forms.hpp"

namespace ptk::forms {

struct SpectralReport {
  std::vector<double> eigenvalues;      // ascending generalized eigenvalues
  std::vector<double> singular_values;  // sigma_k = eigenvalue_k^{-1/2}
  std::vector<double> levels_h;         // refinement levels, when used
  std::vector<std::vector<double>> per_level;
  std::vector<double> extrapolated;     // Richardson limits, when computed
  bool converged = true;                // <1% drift between the finest levels
  Verdict decay_verdict = Verdict::Inconclusive;
  int count_above_half_sigma1 = 0;      // eigenvalues below 4*lambda_1, by inertia

  std::string to_csv() const;
};

// smallest k eigenvalues of  stiffness u = lambda diag(weights) u
std::vector<double> smallest_eigenvalues(const DiscreteForm& form, int k);

// number of generalized eigenvalues strictly below tau (LDLT inertia)
int count_eigenvalues_below(const DiscreteForm& form, double tau);

// top-k singular values of the embedding (energy ball -> weighted L^2)
SpectralReport embedding_singular_values(const DiscreteForm& form, int k);

// lowest-k Dirichlet eigenvalues of the 1/2-Laplacian with Richardson
// extrapolation across the given grid levels (descending h)
SpectralReport dirichlet_eigenvalues(const geometry::Domain& D, int k,
                                     const std::vector<double>& hs,
                                     const std::optional<Truncation>& trunc = {});

struct TruncationDichotomy {
  std::vector<double> lengths;
  std::vector<std::vector<double>> sigmas;  // per truncation
  std::vector<int> counts;                  // sigma_k above sigma_1/2
  bool stabilized = false;                  // Cauchy sigmas and stable counts
  double max_rel_drift = 0.0;
  double count_growth = 0.0;
};

// compactness signature across domain truncations: stabilizing singular
// values with stable counts vs drifting values or growing counts
TruncationDichotomy truncation_dichotomy(const std::vector<SpectralReport>& reports,
                                         const std::vector<double>& lengths, int k);

}  // namespace ptk::forms
