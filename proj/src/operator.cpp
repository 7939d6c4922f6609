#include "sloc/operator.hpp"

#include <cmath>

namespace sloc {

bool BasisMap::compatible(const BasisMap& o) const {
  return internal_dim == o.internal_dim && spinor_dim == o.spinor_dim &&
         (region == o.region || region->same_sites(*o.region));
}

HermitianOperator::HermitianOperator(BasisMap basis, CMat dense)
    : basis_(std::move(basis)), data_(std::move(dense)) {
  const auto& m = std::get<CMat>(data_);
  if (m.rows() != basis_.dim() || m.cols() != basis_.dim())
    throw BasisMismatchError("matrix size does not match basis dimension");
}

HermitianOperator::HermitianOperator(BasisMap basis, SpMat sparse)
    : basis_(std::move(basis)), data_(std::move(sparse)) {
  auto& m = std::get<SpMat>(data_);
  if (m.rows() != basis_.dim() || m.cols() != basis_.dim())
    throw BasisMismatchError("matrix size does not match basis dimension");
  m.makeCompressed();
}

CMat HermitianOperator::to_dense() const {
  if (is_dense()) return dense();
  return CMat(sparse());
}

SpMat HermitianOperator::to_sparse() const {
  if (!is_dense()) return sparse();
  return dense().sparseView(1.0, 0.0);
}

Index HermitianOperator::nonzeros() const {
  if (is_dense()) return dim() * dim();
  return sparse().nonZeros();
}

void HermitianOperator::apply(const CVec& x, CVec& y) const {
  if (is_dense())
    y.noalias() = dense() * x;
  else
    y.noalias() = sparse() * x;
}

double HermitianOperator::hermiticity_defect() const {
  if (is_dense()) return (dense() - dense().adjoint()).cwiseAbs().maxCoeff();
  const SpMat& a = sparse();
  SpMat d = a - SpMat(a.adjoint());
  double m = 0.0;
  for (Index k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double HermitianOperator::inf_norm() const {
  if (is_dense()) return dense().cwiseAbs().colwise().sum().maxCoeff();
  // Hermitian, so column sums equal row sums.
  double m = 0.0;
  const SpMat& a = sparse();
  for (Index k = 0; k < a.outerSize(); ++k) {
    double s = 0.0;
    for (SpMat::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
    m = std::max(m, s);
  }
  return m;
}

std::vector<Index> embedding(const BasisMap& full, const Region& sub) {
  BasisMap sb{nullptr, full.internal_dim, full.spinor_dim};
  std::vector<Index> map;
  map.reserve(static_cast<size_t>(sub.size() * full.internal_dim * full.spinor_dim));
  for (int s = 0; s < full.spinor_dim; ++s) {
    for (const Site& st : sub.sites()) {
      const Index j = full.region->index(st.x, st.y);
      if (j < 0) throw BasisMismatchError("sub-region is not contained in the operator region");
      for (int a = 0; a < full.internal_dim; ++a) map.push_back(full.index(s, j, a));
    }
  }
  return map;
}

HermitianOperator HermitianOperator::restrict_to(const RegionPtr& sub) const {
  const auto map = embedding(basis_, *sub);
  BasisMap nb{sub, basis_.internal_dim, basis_.spinor_dim};
  const Index n = static_cast<Index>(map.size());
  if (is_dense()) {
    CMat out(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) out(i, j) = dense()(map[i], map[j]);
    return {nb, std::move(out)};
  }
  std::vector<Index> inv(static_cast<size_t>(dim()), -1);
  for (Index i = 0; i < n; ++i) inv[map[i]] = i;
  std::vector<Eigen::Triplet<cplx, Index>> trip;
  const SpMat& a = sparse();
  for (Index j = 0; j < n; ++j)
    for (SpMat::InnerIterator it(a, map[j]); it; ++it)
      if (inv[it.row()] >= 0) trip.emplace_back(inv[it.row()], j, it.value());
  SpMat out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return {nb, std::move(out)};
}

}  // namespace sloc
