#include "sloc/linalg/lanczos.hpp"

#include <cmath>
#include <random>

namespace sloc {

LanczosResult lanczos_extremal(const MatVec& op, Index n, const LanczosOptions& opt) {
  LanczosResult res;
  if (n == 0) {
    res.converged = true;
    return res;
  }
  const int m_max = static_cast<int>(std::min<Index>(n, opt.max_iter));
  CMat V(n, m_max + 1);
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  CVec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  V.col(0) = v / v.norm();
  CVec w(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  for (int j = 0; j < m_max; ++j) {
    op(V.col(j), w);
    const double a = V.col(j).dot(w).real();
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      CVec h = V.leftCols(j + 1).adjoint() * w;
      w.noalias() -= V.leftCols(j + 1) * h;
    }
    const double b = w.norm();
    const int m = j + 1;
    const bool last = m == m_max;
    const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(a));
    if (m % 4 == 0 || last || breakdown) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      tri.compute(T);
      const auto& th = tri.eigenvalues();
      const auto& S = tri.eigenvectors();
      const double scale = std::max(std::abs(th(0)), std::abs(th(m - 1)));
      const double r_lo = breakdown ? 0.0 : std::abs(b * S(m - 1, 0));
      const double r_hi = breakdown ? 0.0 : std::abs(b * S(m - 1, m - 1));
      res.min_eig = th(0);
      res.max_eig = th(m - 1);
      res.iterations = m;
      res.residual = std::max(r_lo, r_hi);
      if (breakdown || res.residual <= opt.tol * std::max(scale, 1e-300)) {
        res.converged = true;
        return res;
      }
      if (last) return res;
    }
    beta.push_back(b);
    V.col(j + 1) = w / b;
  }
  return res;
}

double hermitian_norm(const MatVec& op, Index n, const LanczosOptions& opt) {
  auto r = lanczos_extremal(op, n, opt);
  return std::max(std::abs(r.min_eig), std::abs(r.max_eig));
}

}  // namespace sloc
