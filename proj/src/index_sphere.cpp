#include "sloc/oracle.hpp"

#include <cmath>

#include "sloc/dirac.hpp"
#include "sloc/linalg/inertia.hpp"

namespace sloc {

namespace {

HermitianOperator dense_op(const BasisMap& b, CMat m) {
  m = 0.5 * (m + CMat(m.adjoint()));
  return {b, std::move(m)};
}

}  // namespace

FuzzySphere build_index_sphere(const HermitianOperator& flat_h, const TaperPair& taper,
                               const SphereMapFunctions& g, double rho, const IndexSphereOptions& opt) {
  if (flat_h.basis().spinor_dim != 1) throw BasisMismatchError("expected an operator on the undoubled space");
  if (!(rho >= 1.0)) throw DomainError("rho must be >= 1");
  const int n = flat_h.basis().internal_dim;
  const auto dd = build_dirac(flat_h.basis().region);
  const RVec d1 = per_orbital(dd.d1, n), d2 = per_orbital(dd.d2, n), r = per_orbital(dd.r, n);
  const Index dim = flat_h.dim();
  RVec m1(dim), m2(dim), mq(dim), y3(dim);
  for (Index i = 0; i < dim; ++i) {
    const double f2 = std::pow(taper.f(r(i), rho), 2);
    const double w = std::pow(g.G1(f2), 2) * f2;
    m1(i) = w / r(i) * d1(i);
    m2(i) = w / r(i) * d2(i);
    mq(i) = w;
    y3(i) = g.G2(f2);
  }
  const CMat H = flat_h.to_dense();
  const double sgn = opt.positive_projection ? 1.0 : -1.0;
  const CMat P = 0.5 * (CMat::Identity(dim, dim) + sgn * H);
  const CMat Q = CMat::Identity(dim, dim) - P;
  CMat y1 = P * m1.asDiagonal() * P + Q * mq.asDiagonal() * Q;
  CMat y2 = -(P * m2.asDiagonal() * P);
  const BasisMap& b = flat_h.basis();
  CMat y3m = CMat(y3.cast<cplx>().asDiagonal());
  return {dense_op(b, std::move(y1)), dense_op(b, std::move(y2)), HermitianOperator(b, std::move(y3m))};
}

double lift_commutator_norm(const TightBindingModel& flat_model, const TaperPair& taper, double rho, double pad) {
  if (!(pad >= 0.0)) throw DomainError("padding must be non-negative");
  const auto region = make_region(Shape::Disc, rho + pad);
  const auto h = build_hamiltonian(flat_model, region, Storage::Dense);
  const int n = flat_model.internal_dim();
  const auto dd = build_dirac(region);
  const RVec d1 = per_orbital(dd.d1, n), d2 = per_orbital(dd.d2, n), r = per_orbital(dd.r, n);
  const Index dim = h.dim();
  RVec a1(dim), a2(dim), q(dim);
  for (Index i = 0; i < dim; ++i) {
    const double f2 = std::pow(taper.f(r(i), rho), 2);
    a1(i) = f2 / r(i) * d1(i);
    a2(i) = f2 / r(i) * d2(i);
    q(i) = f2;
  }
  const CMat P = 0.5 * (CMat::Identity(dim, dim) - h.dense());
  const CMat Q = CMat::Identity(dim, dim) - P;
  const CMat A1 = P * a1.asDiagonal() * P + Q * q.asDiagonal() * Q;
  const CMat A2 = P * a2.asDiagonal() * P;
  const CMat C = cplx(0.0, 1.0) * (A1 * A2 - A2 * A1);
  const auto inner = make_region(Shape::Disc, rho + pad / 2.0);
  HermitianOperator c(h.basis(), C);
  return operator_norm(c.restrict_to(inner));
}

SphereComparison compare_spheres(const FuzzySphere& a, const FuzzySphere& b) {
  if (!a.basis().compatible(b.basis())) throw BasisMismatchError("spheres live on different bases");
  SphereComparison c;
  const HermitianOperator* A[3] = {&a.X1, &a.X2, &a.X3};
  const HermitianOperator* B[3] = {&b.X1, &b.X2, &b.X3};
  for (int i = 0; i < 3; ++i) {
    const HermitianOperator d(a.basis(), CMat(A[i]->to_dense() - B[i]->to_dense()));
    LanczosOptions lo;
    lo.tol = 1e-9;
    c.dev[i] = operator_norm(d, lo);
    c.max_dev = std::max(c.max_dev, c.dev[i]);
  }
  const auto sa = sphere_signature(a);
  const auto sb = sphere_signature(b);
  c.half_signature_a = sa.half_signature;
  c.half_signature_b = sb.half_signature;
  c.min_abs_eig_a = sa.min_abs_eig;
  c.min_abs_eig_b = sb.min_abs_eig;
  return c;
}

}  // namespace sloc
