#include "ptk/forms.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ptk/cubature.hpp"
#include "ptk/kernels.hpp"
#include "ptk/measure.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/special.hpp"

namespace ptk::forms {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

int linear_index(const std::vector<int>& idx, const std::vector<int>& shape) {
  int lin = 0;
  for (size_t a = 0; a < shape.size(); ++a) lin = lin * shape[a] + idx[a];
  return lin;
}
}  // namespace

int Grid::node_at(const std::vector<int>& idx) const {
  for (size_t a = 0; a < idx.size(); ++a)
    if (idx[a] < 0 || idx[a] >= shape[a]) return -1;
  return node_of_cell[linear_index(idx, shape)];
}

std::vector<double> Grid::coord(const std::vector<int>& idx) const {
  std::vector<double> x(dim);
  for (int a = 0; a < dim; ++a) x[a] = origin[a] + h * idx[a];
  return x;
}

Grid make_grid(const geometry::Domain& D, double h,
               const std::optional<Truncation>& trunc) {
  const int d = D.dimension();
  std::vector<double> lo, hi;
  D.bounding_box(lo, hi);
  if (trunc) {
    for (int a = 0; a < d; ++a) {
      lo[a] = std::max(lo[a], trunc->lo[a]);
      hi[a] = std::min(hi[a], trunc->hi[a]);
    }
  }
  for (int a = 0; a < d; ++a)
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]))
      throw std::invalid_argument("make_grid: unbounded domain needs a truncation box");

  Grid g;
  g.dim = d;
  g.h = h;
  g.origin.resize(d);
  g.shape.resize(d);
  long total = 1;
  for (int a = 0; a < d; ++a) {
    // lattice strictly inside (lo, hi): points lo + h, lo + 2h, ...
    const int n = static_cast<int>(std::floor((hi[a] - lo[a]) / h + 1e-9)) - 1;
    if (n < 1) throw std::invalid_argument("make_grid: grid too coarse for the domain");
    g.origin[a] = lo[a] + h;
    g.shape[a] = n;
    total *= n;
  }
  if (total > 4000000L) throw std::invalid_argument("make_grid: lattice too large");

  g.node_of_cell.assign(total, -1);
  std::vector<int> idx(d, 0);
  for (long lin = 0; lin < total; ++lin) {
    long rem = lin;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % g.shape[a]);
      rem /= g.shape[a];
    }
    auto x = g.coord(idx);
    if (!D.contains(x.data(), d)) continue;
    if (trunc) {
      bool in = true;
      for (int a = 0; a < d; ++a)
        in = in && trunc->lo[a] < x[a] && x[a] < trunc->hi[a];
      if (!in) continue;
    }
    // weight: full cell when clearly interior, clipped volume otherwise
    const double bd = D.boundary_distance(x.data(), d);
    double w = std::pow(h, d);
    if (bd < h) {
      auto f = [&](const double* y) { return D.contains(y, d) ? 1.0 : 0.0; };
      std::vector<double> clo(d), chi(d);
      for (int a = 0; a < d; ++a) {
        clo[a] = x[a] - 0.5 * h;
        chi[a] = x[a] + 0.5 * h;
      }
      num::CubOptions co;
      co.rel_tol = 1e-4;
      co.max_boxes = 2000;
      w = num::integrate_box(f, clo, chi, co).value;
      if (w <= 0.0) w = 1e-12 * std::pow(h, d);
    }
    g.node_of_cell[linear_index(idx, g.shape)] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(x);
    g.weights.push_back(w);
  }
  if (g.nodes.empty()) throw std::invalid_argument("make_grid: no interior nodes");
  return g;
}

double DiscreteForm::energy(const Eigen::VectorXd& u) const {
  return u.dot(stiffness * u);
}

double DiscreteForm::l2p_norm_sq(const Eigen::VectorXd& u, double p) const {
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i)
    s += grid.weights[i] * std::pow(std::abs(u[i]), 2.0 * p);
  return std::pow(s, 1.0 / p);
}

double DiscreteForm::mass_total() const {
  double s = 0.0;
  for (double w : grid.weights) s += w;
  return s;
}

void DiscreteForm::dump(std::ostream& os) const {
  os << "ptk-form v1\n";
  os << "dim " << grid.dim << " h " << grid.h << " nodes " << grid.nodes.size()
     << " nonlocal " << (nonlocal ? 1 : 0) << "\n";
  for (size_t i = 0; i < grid.nodes.size(); ++i) {
    os << i;
    for (double c : grid.nodes[i]) os << " " << c;
    os << " " << grid.weights[i] << "\n";
  }
  os << "stiffness " << stiffness.nonZeros() << "\n";
  for (int k = 0; k < stiffness.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness, k); it; ++it)
      if (it.row() <= it.col()) os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

DiscreteForm assemble_local(const geometry::Domain& D, double h,
                            const std::optional<Truncation>& trunc) {
  DiscreteForm form;
  form.grid = make_grid(D, h, trunc);
  const int d = form.grid.dim;
  for (int a = 0; a < d; ++a)
    if (form.grid.shape[a] < 8)
      throw std::invalid_argument("assemble_local: fewer than 8 interior nodes per axis");
  const int n = static_cast<int>(form.grid.nodes.size());
  const double c = 0.5 * std::pow(h, d - 2);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * (2 * d + 1));
  std::vector<double> diag(n, 0.0);

  std::vector<int> idx(d, 0);
  const long total = static_cast<long>(form.grid.node_of_cell.size());
  for (long lin = 0; lin < total; ++lin) {
    const int i = form.grid.node_of_cell[lin];
    if (i < 0) continue;
    long rem = lin;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % form.grid.shape[a]);
      rem /= form.grid.shape[a];
    }
    for (int a = 0; a < d; ++a) {
      auto nb = idx;
      nb[a] += 1;
      const int j = form.grid.node_at(nb);
      if (j >= 0) {
        diag[i] += c;
        diag[j] += c;
        trips.emplace_back(i, j, -c);
        trips.emplace_back(j, i, -c);
      } else {
        diag[i] += c;  // Dirichlet edge, u = 0 outside
      }
      nb[a] -= 2;
      if (form.grid.node_at(nb) < 0) diag[i] += c;
    }
  }
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, diag[i]);
  form.stiffness.resize(n, n);
  form.stiffness.setFromTriplets(trips.begin(), trips.end());
  return form;
}

namespace {

// exact cell-pair integral of J_m over two offset lattice cells
double cell_pair_weight(double alpha, double m, int d, double h,
                        const std::vector<int>& offset) {
  // 6-point Gauss per axis on each cell
  static const double gx[6] = {-0.9324695142031521, -0.6612093864662645,
                               -0.2386191860831969, 0.2386191860831969,
                               0.6612093864662645,  0.9324695142031521};
  static const double gw[6] = {0.1713244923791704, 0.3607615730481386,
                               0.4679139345726910, 0.4679139345726910,
                               0.3607615730481386, 0.1713244923791704};
  const int n1 = [&] {
    int t = 1;
    for (int a = 0; a < 2 * d; ++a) t *= 6;
    return t;
  }();
  double sum = 0.0;
  std::vector<double> x(d), y(d);
  for (int it = 0; it < n1; ++it) {
    int rem = it;
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const int j = rem % 6;
      rem /= 6;
      x[a] = 0.5 * h * gx[j];
      w *= 0.5 * h * gw[j];
    }
    for (int a = 0; a < d; ++a) {
      const int j = rem % 6;
      rem /= 6;
      y[a] = offset[a] * h + 0.5 * h * gx[j];
      w *= 0.5 * h * gw[j];
    }
    const double r = geometry::distance(x.data(), y.data(), d);
    if (r <= 0.0) continue;
    sum += w * kernels::jump_kernel(alpha, m, d, r);
  }
  return sum;
}

}  // namespace

DiscreteForm assemble_nonlocal(double alpha, double m, const geometry::Domain& D,
                               double h, const std::optional<Truncation>& trunc,
                               const NonlocalOptions& opts) {
  DiscreteForm form;
  form.grid = make_grid(D, h, trunc);
  form.nonlocal = true;
  form.dirichlet = opts.dirichlet_exterior;
  const int d = form.grid.dim;
  const int n = static_cast<int>(form.grid.nodes.size());
  if (n > 20000) throw std::invalid_argument("assemble_nonlocal: too many nodes");

  // truncation tail check: coupling mass beyond the radius must stay small
  {
    auto jr = [&](double s) {
      return kernels::jump_kernel(alpha, m, d, s) * num::unit_sphere_area(d) *
             std::pow(s, d - 1);
    };
    num::QuadOptions o;
    o.rel_tol = 1e-6;
    const double R = opts.truncation_radius;
    const double inner = num::integrate(jr, h, R, o).value;
    double tail;
    if (m > 0.0) {
      tail = num::integrate(jr, R, R + 80.0 / std::pow(m, 1.0 / alpha), o).value;
    } else {
      // pure power tail, closed form
      tail = kernels::jump_constant(d, alpha) * num::unit_sphere_area(d) *
             std::pow(R, -alpha) / alpha;
    }
    if (tail > 0.01 * (inner + tail))
      throw std::invalid_argument("assemble_nonlocal: truncation radius too small");
  }

  const int K = std::max(1, static_cast<int>(std::floor(opts.truncation_radius / h)));
  // offset table over the half-space of lattice offsets
  std::vector<std::vector<int>> offsets;
  std::vector<double> weight;
  {
    std::vector<int> off(d, 0);
    std::function<void(int)> rec = [&](int a) {
      if (a == d) {
        bool positive = false;
        for (int q : off) {
          if (q > 0) {
            positive = true;
            break;
          }
          if (q < 0) return;
        }
        if (!positive) return;
        double r2 = 0.0;
        for (int q : off) r2 += static_cast<double>(q) * q;
        const double r = h * std::sqrt(r2);
        if (r > opts.truncation_radius) return;
        int norm_inf = 0;
        for (int q : off) norm_inf = std::max(norm_inf, std::abs(q));
        double w;
        if (norm_inf <= opts.exact_offsets)
          w = cell_pair_weight(alpha, m, d, h, off);
        else
          w = kernels::jump_kernel(alpha, m, d, r) * std::pow(h, 2 * d);
        offsets.push_back(off);
        weight.push_back(w);
        return;
      }
      for (int q = -K; q <= K; ++q) {
        off[a] = q;
        rec(a + 1);
      }
      off[a] = 0;
    };
    rec(0);
  }

  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> diag(n, 0.0);
  std::vector<int> idx(d, 0);
  const long total = static_cast<long>(form.grid.node_of_cell.size());
  for (long lin = 0; lin < total; ++lin) {
    const int i = form.grid.node_of_cell[lin];
    if (i < 0) continue;
    long rem = lin;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % form.grid.shape[a]);
      rem /= form.grid.shape[a];
    }
    for (size_t k = 0; k < offsets.size(); ++k) {
      auto nb = idx;
      for (int a = 0; a < d; ++a) nb[a] += offsets[k][a];
      const int j = form.grid.node_at(nb);
      const double w = weight[k];  // half-space offsets: each unordered pair once
      if (j >= 0) {
        diag[i] += w;
        diag[j] += w;
        trips.emplace_back(i, j, -w);
        trips.emplace_back(j, i, -w);
      } else if (opts.dirichlet_exterior) {
        // coupling to the zero extension; cells beyond the truncation
        // radius were already bounded by the 1% tail check
        diag[i] += w;
      }
    }
  }
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, diag[i]);
  form.stiffness.resize(n, n);
  form.stiffness.setFromTriplets(trips.begin(), trips.end());
  return form;
}

// ---------------------------------------------------------------------------

double discrete_green_potential_norm(const DiscreteForm& form, double p) {
  const int n = static_cast<int>(form.grid.nodes.size());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(form.stiffness);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("discrete_green_potential_norm: factorization failed");
  double best = 0.0;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Eigen::VectorXd col = solver.solve(e);
    e[j] = 0.0;
    // R^p mu (x_j) = sum_i R(x_j, x_i)^p w_i, with R(x_j,x_i) = (A^{-1})_{ji}
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += std::pow(std::max(col[i], 0.0), p) * form.grid.weights[i];
    best = std::max(best, s);
  }
  return best;
}

SVReport stollmann_voigt_check(const DiscreteForm& form, double p,
                               const std::vector<Eigen::VectorXd>& us,
                               std::optional<double> potential_norm) {
  SVReport rep;
  rep.potential_norm = potential_norm ? *potential_norm
                                      : discrete_green_potential_norm(form, p);
  if (!std::isfinite(rep.potential_norm)) {
    rep.skipped = true;
    return rep;
  }
  const double cfac = std::pow(rep.potential_norm, 1.0 / p);
  rep.min_margin = kInf;
  for (const auto& u : us) {
    const double lhs = form.l2p_norm_sq(u, p);
    const double rhs = cfac * form.energy(u);
    rep.margins.push_back(rhs - lhs);
    rep.min_margin = std::min(rep.min_margin, rhs - lhs);
  }
  if (us.empty()) rep.min_margin = 0.0;
  return rep;
}

TightnessReport tightness_diagnostic(const DiscreteForm& form, double p, double M,
                                     const std::vector<double>& levels,
                                     std::uint64_t seed, int samples) {
  TightnessReport rep;
  rep.levels = levels;
  rep.sup_tail.assign(levels.size(), 0.0);
  const int n = static_cast<int>(form.grid.nodes.size());
  if (M <= 0.0) {
    // only u = 0 sits in the energy ball once a Dirichlet part is active
    rep.verdict = Verdict::In;
    return rep;
  }

  auto tail_of = [&](const Eigen::VectorXd& u, double L) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::pow(std::abs(u[i]), 2.0 * p);
      if (v >= L) s += v * form.grid.weights[i];
    }
    return s;
  };

  auto project = [&](Eigen::VectorXd u) {
    const double e = form.energy(u);
    if (e <= 0.0) return Eigen::VectorXd(Eigen::VectorXd::Zero(n));
    return Eigen::VectorXd(u * std::sqrt(M / e));
  };

  auto rng = num::RngStream::root(seed);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(form.stiffness);

  std::vector<Eigen::VectorXd> pool;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = rng.normal();
    pool.push_back(project(u));
  }
  // deterministic bump candidates: scaled Green columns at a node subsample
  if (solver.info() == Eigen::Success) {
    const int stride = std::max(1, n / 24);
    for (int j = 0; j < n; j += stride) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = 1.0;
      pool.push_back(project(solver.solve(e)));
    }
  }

  for (size_t li = 0; li < levels.size(); ++li) {
    const double L = levels[li];
    double best = 0.0;
    Eigen::VectorXd bestu = pool.front();
    for (const auto& u : pool) {
      const double t = tail_of(u, L);
      if (t > best) {
        best = t;
        bestu = u;
      }
    }
    // energy-metric gradient ascent from the best sample
    Eigen::VectorXd u = bestu;
    double cur = best;
    double step = 1.0;
    for (int it = 0; it < 60 && solver.info() == Eigen::Success; ++it) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) {
        const double v = std::pow(std::abs(u[i]), 2.0 * p);
        if (v >= L)
          g[i] = 2.0 * p * std::pow(std::abs(u[i]), 2.0 * p - 1.0) *
                 (u[i] >= 0 ? 1.0 : -1.0) * form.grid.weights[i];
      }
      if (g.norm() == 0.0) {
        // nothing above the level: push the largest entry up instead
        int arg = 0;
        for (int i = 1; i < n; ++i)
          if (std::abs(u[i]) > std::abs(u[arg])) arg = i;
        g[arg] = (u[arg] >= 0 ? 1.0 : -1.0) * form.grid.weights[arg];
      }
      Eigen::VectorXd dir = solver.solve(g);
      bool improved = false;
      while (step > 1e-6) {
        Eigen::VectorXd cand = project(u + step * dir);
        const double t = tail_of(cand, L);
        if (t > cur * (1.0 + 1e-12)) {
          u = cand;
          cur = t;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    rep.sup_tail[li] = cur;
  }

  DecayProfile prof;
  prof.abscissae = levels;
  prof.values = rep.sup_tail;
  prof.direction = LimitDirection::TowardInfinity;
  finalize_profile(prof);
  rep.verdict = prof.verdict;
  return rep;
}

}  // namespace ptk::forms
