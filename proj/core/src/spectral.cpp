#include "ptk/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptk::forms {

namespace {

// Lanczos with full reorthogonalization on B = W^{1/2} A^{-1} W^{1/2};
// largest Ritz values of B are the reciprocals of the smallest generalized
// eigenvalues of A u = lambda W u.
std::vector<double> lanczos_smallest(const DiscreteForm& form, int k) {
  const int n = static_cast<int>(form.grid.nodes.size());
  Eigen::VectorXd wsqrt(n);
  for (int i = 0; i < n; ++i) wsqrt[i] = std::sqrt(form.grid.weights[i]);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(form.stiffness);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lanczos: stiffness factorization failed");

  auto apply = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd t = wsqrt.cwiseProduct(v);
    Eigen::VectorXd s = solver.solve(t);
    return Eigen::VectorXd(wsqrt.cwiseProduct(s));
  };

  const int m = std::min(n, std::max(3 * k + 30, 60));
  std::vector<Eigen::VectorXd> V;
  std::vector<double> a(m, 0.0), b(m, 0.0);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  {
    // deterministic start
    for (int i = 0; i < n; ++i) v[i] = std::sin(0.37 * (i + 1)) + 0.1;
    v.normalize();
  }
  V.push_back(v);
  Eigen::VectorXd w = apply(v);
  a[0] = v.dot(w);
  w -= a[0] * v;
  for (int j = 1; j < m; ++j) {
    // full reorthogonalization, twice
    for (int rep = 0; rep < 2; ++rep)
      for (const auto& q : V) w -= q.dot(w) * q;
    b[j - 1] = w.norm();
    if (b[j - 1] < 1e-13) break;
    v = w / b[j - 1];
    V.push_back(v);
    w = apply(v) - b[j - 1] * V[V.size() - 2];
    a[j] = v.dot(w);
    w -= a[j] * v;
  }
  const int mm = static_cast<int>(V.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
  for (int i = 0; i < mm; ++i) {
    T(i, i) = a[i];
    if (i + 1 < mm) {
      T(i, i + 1) = b[i];
      T(i + 1, i) = b[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  std::vector<double> theta(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(theta.rbegin(), theta.rend());  // descending
  std::vector<double> lam;
  for (int i = 0; i < std::min<int>(k, theta.size()); ++i)
    if (theta[i] > 0.0) lam.push_back(1.0 / theta[i]);
  std::sort(lam.begin(), lam.end());
  return lam;
}

}  // namespace

std::vector<double> smallest_eigenvalues(const DiscreteForm& form, int k) {
  const int n = static_cast<int>(form.grid.nodes.size());
  if (k > n) throw std::invalid_argument("smallest_eigenvalues: k exceeds grid size");
  if (n <= 1200) {
    Eigen::MatrixXd A = Eigen::MatrixXd(form.stiffness);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = form.grid.weights[i];
    Eigen::MatrixXd B = w.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
    std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(lam.begin(), lam.end());
    lam.resize(k);
    return lam;
  }
  return lanczos_smallest(form, k);
}

int count_eigenvalues_below(const DiscreteForm& form, double tau) {
  const int n = static_cast<int>(form.grid.nodes.size());
  Eigen::SparseMatrix<double> S = form.stiffness;
  for (int i = 0; i < n; ++i) S.coeffRef(i, i) -= tau * form.grid.weights[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success) {
    // shift slightly off a possible eigenvalue and retry
    S = form.stiffness;
    const double tau2 = tau * (1.0 + 1e-9) + 1e-12;
    for (int i = 0; i < n; ++i) S.coeffRef(i, i) -= tau2 * form.grid.weights[i];
    ldlt.compute(S);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("count_eigenvalues_below: factorization failed");
  }
  int cnt = 0;
  for (int i = 0; i < n; ++i)
    if (ldlt.vectorD()[i] < 0.0) ++cnt;
  return cnt;
}

SpectralReport embedding_singular_values(const DiscreteForm& form, int k) {
  SpectralReport rep;
  rep.eigenvalues = smallest_eigenvalues(form, k);
  for (double l : rep.eigenvalues)
    rep.singular_values.push_back(l > 0.0 ? 1.0 / std::sqrt(l) : 0.0);
  // sigma > sigma_1/2 means lambda < 4 lambda_1; exact count by inertia
  if (!rep.eigenvalues.empty())
    rep.count_above_half_sigma1 =
        count_eigenvalues_below(form, 4.0 * rep.eigenvalues.front());
  return rep;
}

SpectralReport dirichlet_eigenvalues(const geometry::Domain& D, int k,
                                     const std::vector<double>& hs,
                                     const std::optional<Truncation>& trunc) {
  SpectralReport rep;
  std::vector<double> sorted_h = hs;
  std::sort(sorted_h.rbegin(), sorted_h.rend());  // coarse -> fine
  for (double h : sorted_h) {
    auto form = assemble_local(D, h, trunc);
    rep.per_level.push_back(smallest_eigenvalues(form, k));
    rep.levels_h.push_back(h);
  }
  const auto& fine = rep.per_level.back();
  rep.eigenvalues = fine;
  for (double l : fine)
    rep.singular_values.push_back(l > 0.0 ? 1.0 / std::sqrt(l) : 0.0);

  if (rep.per_level.size() >= 2) {
    const auto& prev = rep.per_level[rep.per_level.size() - 2];
    for (int i = 0; i < k; ++i) {
      const double drift = std::abs(fine[i] - prev[i]) / std::max(fine[i], 1e-300);
      if (drift > 0.01) rep.converged = false;
    }
  }
  if (rep.per_level.size() >= 3) {
    // Richardson with estimated order from the last three levels
    const auto& l1 = rep.per_level[rep.per_level.size() - 3];
    const auto& l2 = rep.per_level[rep.per_level.size() - 2];
    const auto& l3 = rep.per_level.back();
    const double r = sorted_h[sorted_h.size() - 2] / sorted_h.back();  // usually 2
    for (int i = 0; i < k; ++i) {
      const double d12 = l1[i] - l2[i];
      const double d23 = l2[i] - l3[i];
      if (d23 != 0.0 && d12 / d23 > 1.0) {
        const double q = std::log(d12 / d23) / std::log(r);
        const double lim = l3[i] + d23 / (std::pow(r, q) - 1.0);
        rep.extrapolated.push_back(lim);
      } else {
        rep.extrapolated.push_back(l3[i]);
      }
    }
  }
  return rep;
}

TruncationDichotomy truncation_dichotomy(const std::vector<SpectralReport>& reports,
                                         const std::vector<double>& lengths, int k) {
  TruncationDichotomy out;
  out.lengths = lengths;
  for (const auto& r : reports) {
    std::vector<double> s = r.singular_values;
    if (static_cast<int>(s.size()) > k) s.resize(k);
    out.sigmas.push_back(s);
    out.counts.push_back(r.count_above_half_sigma1);
  }
  if (reports.size() >= 2) {
    const auto& a = out.sigmas[out.sigmas.size() - 2];
    const auto& b = out.sigmas.back();
    for (size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      out.max_rel_drift =
          std::max(out.max_rel_drift, std::abs(a[i] - b[i]) / std::max(b[i], 1e-300));
    out.count_growth = static_cast<double>(out.counts.back()) /
                       std::max(out.counts[out.counts.size() - 2], 1);
  }
  out.stabilized = out.max_rel_drift < 0.05 && out.count_growth < 1.3;
  return out;
}

std::string SpectralReport::to_csv() const {
  std::ostringstream os;
  os << "k,eigenvalue,singular_value";
  const bool ex = !extrapolated.empty();
  if (ex) os << ",extrapolated";
  os << "\n";
  for (size_t i = 0; i < eigenvalues.size(); ++i) {
    os << (i + 1) << "," << eigenvalues[i] << "," << singular_values[i];
    if (ex && i < extrapolated.size()) os << "," << extrapolated[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace ptk::forms
