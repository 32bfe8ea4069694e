#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ptk/quadrature.hpp"

namespace ptk::num {

using FnNd = std::function<double(const double*)>;

struct CubOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  long max_boxes = 200000;
};

// Adaptive tensor-product cubature over an axis-aligned box, d <= 3.
// Degree-5 vs degree-3 rule difference drives subdivision of the longest
// axis. Indicator-type integrands converge; tolerances are then best-effort
// and the returned error estimate should be trusted over the status.
QuadResult integrate_box(const FnNd& f, const std::vector<double>& lo,
                         const std::vector<double>& hi, const CubOptions& opts = {});

}  // namespace ptk::num
