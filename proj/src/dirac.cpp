#include "sloc/dirac.hpp"

#include <cmath>

namespace sloc {

CVec DiracData::d0() const {
  CVec z(d1.size());
  for (Index i = 0; i < d1.size(); ++i) z(i) = cplx(d1(i), d2(i));
  return z;
}

DiracData build_dirac(const RegionPtr& region) {
  DiracData d;
  d.region = region;
  const Index m = region->size();
  d.d1.resize(m);
  d.d2.resize(m);
  d.r.resize(m);
  d.phase.resize(m);
  for (Index i = 0; i < m; ++i) {
    const Site& s = region->site(i);
    d.d1(i) = s.x + ((s.x == 0 && s.y == 0) ? 1.0 : 0.0);
    d.d2(i) = s.y;
    d.r(i) = std::hypot(d.d1(i), d.d2(i));
    d.phase(i) = cplx(d.d1(i), d.d2(i)) / d.r(i);
  }
  return d;
}

HermitianOperator dirac_operator(const DiracData& d, int internal_dim) {
  BasisMap basis{d.region, internal_dim, 2};
  const Index b = basis.block();
  std::vector<Eigen::Triplet<cplx, Index>> trip;
  trip.reserve(static_cast<size_t>(2 * b));
  for (Index s = 0; s < d.sites(); ++s) {
    const cplx z(d.d1(s), d.d2(s));
    for (int a = 0; a < internal_dim; ++a) {
      const Index i = s * internal_dim + a;
      trip.emplace_back(b + i, i, z);
      trip.emplace_back(i, b + i, std::conj(z));
    }
  }
  SpMat m(2 * b, 2 * b);
  m.setFromTriplets(trip.begin(), trip.end());
  return {basis, std::move(m)};
}

HermitianOperator truncate(const HermitianOperator& op, const RegionPtr& region) {
  return op.restrict_to(region);
}

RVec per_orbital(const RVec& v, int n) {
  RVec out(v.size() * n);
  for (Index i = 0; i < v.size(); ++i) out.segment(i * n, n).setConstant(v(i));
  return out;
}

CVec per_orbital(const CVec& v, int n) {
  CVec out(v.size() * n);
  for (Index i = 0; i < v.size(); ++i) out.segment(i * n, n).setConstant(v(i));
  return out;
}

}  // namespace sloc
