#include "sloc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "sloc/dirac.hpp"

namespace sloc {

namespace {

// Counts interior-localized directions in span(K): eigenvalues of K^* Pi K
// above 1/2, with Pi the projection on the inner box.
std::pair<Index, double> interior_count(const CMat& k, const RVec& inner) {
  if (k.cols() == 0) return {0, 0.0};
  const CMat m = k.adjoint() * inner.asDiagonal() * k;
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  Index c = 0;
  double worst = 0.0;
  for (double w : es.eigenvalues()) {
    if (w > 0.5) ++c;
    worst = std::max(worst, std::min(std::abs(w), std::abs(1.0 - w)));
  }
  return {c, worst};
}

}  // namespace

FredholmEstimate fredholm_index_estimate(const FlatHamiltonian& flat, const FredholmOptions& opt) {
  if (!(opt.box_radius >= 2.0)) throw DomainError("Fredholm box radius must be >= 2");
  if (!(opt.threshold > 0.0 && opt.threshold < 1.0)) throw DomainError("threshold must lie in (0,1)");
  const auto box = make_region(Shape::Square, opt.box_radius);
  const HermitianOperator h = flat.on(box, Storage::Dense);
  const int n = h.basis().internal_dim;
  Eigen::SelfAdjointEigenSolver<CMat> es(h.dense());
  const Index m = (es.eigenvalues().array() < 0.0).count();
  const CMat V = es.eigenvectors().leftCols(m);  // Ran P on the box
  if (m == 0) {  // P = 0: T is the identity
    FredholmEstimate e;
    e.threshold = opt.threshold;
    e.smallest_uncounted = 1.0;
    e.separation = 1.0 / (opt.threshold / 10.0);
    e.reliable = true;
    return e;
  }

  const auto dd = build_dirac(box);
  const CVec phase = per_orbital(dd.phase, n);
  // On Ran P the operator P F P acts as A = V^* F V; T is the identity elsewhere.
  const CMat A = V.adjoint() * phase.asDiagonal() * V;
  Eigen::BDCSVD<CMat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();  // descending

  FredholmEstimate e;
  e.threshold = opt.threshold;
  const double inner_r = opt.interior_fraction * opt.box_radius;
  RVec inner(h.dim());
  for (Index i = 0; i < box->size(); ++i) {
    const Site& st = box->site(i);
    const bool in = std::max(std::abs(st.x), std::abs(st.y)) <= inner_r;
    inner.segment(i * n, n).setConstant(in ? 1.0 : 0.0);
  }
  Index nsmall = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) < opt.threshold) ++nsmall;
  const Index first = s.size() - nsmall;
  e.largest_counted = nsmall > 0 ? s(first) : 0.0;
  e.smallest_uncounted = first > 0 ? s(first - 1) : 1.0;
  e.separation = e.smallest_uncounted / std::max(e.largest_counted, opt.threshold / 10.0);
  for (Index i = std::max<Index>(0, s.size() - 8); i < s.size(); ++i) e.smallest_singular_values.push_back(s(i));
  std::reverse(e.smallest_singular_values.begin(), e.smallest_singular_values.end());

  // A w = s u: right vectors span ker T, left vectors ker T^*.
  const CMat kt = V * svd.matrixV().rightCols(nsmall);
  const CMat kts = V * svd.matrixU().middleCols(first, nsmall);
  const auto [ct, wt] = interior_count(kt, inner);
  const auto [cs, ws] = interior_count(kts, inner);
  e.dim_ker_T = ct;
  e.dim_ker_Tstar = cs;
  e.boundary_ker_T = nsmall - ct;
  e.boundary_ker_Tstar = nsmall - cs;
  e.index = static_cast<long>(ct) - static_cast<long>(cs);
  e.worst_localization = std::max(wt, ws);
  e.reliable = e.separation >= 10.0 && e.worst_localization < 0.2;
  return e;
}

FredholmEstimate fredholm_index_estimate(const TightBindingModel& model, const FredholmOptions& opt) {
  return fredholm_index_estimate(flatten(model, opt.flatten), opt);
}

}  // namespace sloc
