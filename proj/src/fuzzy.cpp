#include "sloc/fuzzy.hpp"

#include <cmath>

#include "sloc/dirac.hpp"

namespace sloc {

namespace {

HermitianOperator diagonal_op(const BasisMap& b, const RVec& d) {
  SpMat m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Index i = 0; i < d.size(); ++i) m.insert(i, i) = d(i);
  return {b, std::move(m)};
}

double herm_norm(const MatVec& op, Index n, const LanczosOptions& opt) {
  LanczosOptions o = opt;
  o.tol = std::max(o.tol, 1e-9);
  return hermitian_norm(op, n, o);
}

void check_same_basis(const FuzzySphere& x) {
  if (!x.X1.basis().compatible(x.X2.basis()) || !x.X1.basis().compatible(x.X3.basis()))
    throw BasisMismatchError("fuzzy sphere components live on different bases");
}

}  // namespace

WidthParts fuzzy_width_parts(const FuzzySphere& x, const LanczosOptions& opt) {
  check_same_basis(x);
  const Index n = x.dim();
  const HermitianOperator* X[3] = {&x.X1, &x.X2, &x.X3};
  WidthParts w;
  w.sum_squares = herm_norm(
      [&](const CVec& v, CVec& y) {
        CVec t(n), u(n);
        y = v;
        for (auto* op : X) {
          op->apply(v, t);
          op->apply(t, u);
          y -= u;
        }
      },
      n, opt);
  auto comm = [&](const HermitianOperator& a, const HermitianOperator& b) {
    // i[A,B] is Hermitian with the same norm.
    return herm_norm(
        [&](const CVec& v, CVec& y) {
          CVec t(n), u(n), s(n);
          b.apply(v, t);
          a.apply(t, u);
          a.apply(v, t);
          b.apply(t, s);
          y = cplx(0.0, 1.0) * (u - s);
        },
        n, opt);
  };
  w.c12 = comm(x.X1, x.X2);
  w.c13 = comm(x.X1, x.X3);
  w.c23 = comm(x.X2, x.X3);
  return w;
}

double fuzzy_width(const FuzzySphere& x, const LanczosOptions& opt) { return fuzzy_width_parts(x, opt).width(); }

HermitianOperator sphere_to_matrix(const FuzzySphere& x) {
  check_same_basis(x);
  const Index n = x.dim();
  const cplx I(0.0, 1.0);
  const BasisMap b = x.basis().doubled();
  if (x.X1.is_dense() || x.X2.is_dense() || x.X3.is_dense()) {
    CMat m(2 * n, 2 * n);
    const CMat x1 = x.X1.to_dense(), x2 = x.X2.to_dense(), x3 = x.X3.to_dense();
    m.topLeftCorner(n, n) = x3;
    m.bottomRightCorner(n, n) = -x3;
    m.topRightCorner(n, n) = x1 - I * x2;
    m.bottomLeftCorner(n, n) = x1 + I * x2;
    return {b, std::move(m)};
  }
  std::vector<Eigen::Triplet<cplx, Index>> trip;
  auto add = [&](const SpMat& s, Index r0, Index c0, cplx f) {
    for (Index j = 0; j < s.outerSize(); ++j)
      for (SpMat::InnerIterator it(s, j); it; ++it) trip.emplace_back(r0 + it.row(), c0 + j, f * it.value());
  };
  add(x.X3.sparse(), 0, 0, 1.0);
  add(x.X3.sparse(), n, n, -1.0);
  add(x.X1.sparse(), 0, n, 1.0);
  add(x.X2.sparse(), 0, n, -I);
  add(x.X1.sparse(), n, 0, 1.0);
  add(x.X2.sparse(), n, 0, I);
  SpMat m(2 * n, 2 * n);
  m.setFromTriplets(trip.begin(), trip.end());
  return {b, std::move(m)};
}

namespace {

// X1,2 = c D1,2 with c = f^2 / R, X3 = F H F.
FuzzySphere tapered_sphere(const HermitianOperator& h, const RVec& c, const RVec& Fx, const DiracData& dd) {
  const int n = h.basis().internal_dim;
  const RVec d1 = per_orbital(dd.d1, n), d2 = per_orbital(dd.d2, n);
  const RVec x1 = (c.array() * d1.array()).matrix();
  const RVec x2 = (c.array() * d2.array()).matrix();
  const BasisMap& b = h.basis();
  if (h.is_dense()) {
    CMat x3 = Fx.asDiagonal() * h.dense() * Fx.asDiagonal();
    return {diagonal_op(b, x1), diagonal_op(b, x2), HermitianOperator(b, std::move(x3))};
  }
  SpMat x3 = Fx.asDiagonal() * h.sparse() * Fx.asDiagonal();
  return {diagonal_op(b, x1), diagonal_op(b, x2), HermitianOperator(b, std::move(x3))};
}

void check_flat_input(const HermitianOperator& h, double rho) {
  if (h.basis().spinor_dim != 1) throw BasisMismatchError("expected an operator on the undoubled space");
  if (!(rho >= 1.0)) throw DomainError("rho must be >= 1");
}

}  // namespace

FuzzySphere build_fuzzy_sphere(const HermitianOperator& h, const TaperPair& taper, double rho) {
  check_flat_input(h, rho);
  const auto dd = build_dirac(h.basis().region);
  const RVec r = per_orbital(dd.r, h.basis().internal_dim);
  RVec c(r.size()), Fx(r.size());
  for (Index i = 0; i < r.size(); ++i) {
    const double f = taper.f(r(i), rho);
    c(i) = f * f / r(i);
    Fx(i) = taper.F(r(i), rho);
  }
  return tapered_sphere(h, c, Fx, dd);
}

FuzzySphere localizer_sphere_homotopy(const HermitianOperator& h, const TaperPair& taper, double kappa,
                                      double rho, double lambda) {
  check_flat_input(h, rho);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("homotopy parameter must lie in [0,1]");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const auto dd = build_dirac(h.basis().region);
  const RVec r = per_orbital(dd.r, h.basis().internal_dim);
  // f(R, lambda) = (1 - lambda) (kappa R)^{1/2} + lambda f_rho(R); the square over R is
  // expanded so that lambda = 0 gives kappa D and lambda = 1 the tapered sphere bit for bit.
  RVec c(r.size()), Fx(r.size());
  for (Index i = 0; i < r.size(); ++i) {
    const double f = taper.f(r(i), rho);
    c(i) = (1.0 - lambda) * (1.0 - lambda) * kappa + 2.0 * lambda * (1.0 - lambda) * std::sqrt(kappa / r(i)) * f +
           lambda * lambda * (f * f / r(i));
    Fx(i) = (1.0 - lambda) + lambda * taper.F(r(i), rho);
  }
  return tapered_sphere(h, c, Fx, dd);
}

SpectralCalculus::SpectralCalculus(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.to_dense());
  v_ = es.eigenvectors();
  w_ = es.eigenvalues();
}

CMat SpectralCalculus::apply(const std::function<double(double)>& f) const {
  RVec d(w_.size());
  for (Index i = 0; i < w_.size(); ++i) d(i) = f(w_(i));
  return v_ * d.asDiagonal() * v_.adjoint();
}

CMat SpectralCalculus::sandwich(const std::function<double(double)>& g, const HermitianOperator& x) const {
  const CMat G = apply(g);
  if (!x.is_dense()) {
    const SpMat& s = x.sparse();
    bool diag = true;
    for (Index j = 0; j < s.outerSize() && diag; ++j)
      for (SpMat::InnerIterator it(s, j); it; ++it)
        if (it.row() != j) {
          diag = false;
          break;
        }
    if (diag) {
      CVec d = CVec::Zero(s.rows());
      for (Index j = 0; j < s.outerSize(); ++j)
        for (SpMat::InnerIterator it(s, j); it; ++it) d(j) = it.value();
      return (G * d.asDiagonal()) * G;
    }
    return G * (s * G);
  }
  return G * x.dense() * G;
}

FuzzySphere map_fuzzy_sphere(const FuzzySphere& x, const SpectralCalculus& c, const SphereMapFunctions& g,
                             double lambda) {
  check_same_basis(x);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("homotopy parameter must lie in [0,1]");
  if (c.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + 1e-8)
    throw DomainError("X3 has spectrum outside [-1, 1]");
  auto clip = [](double v) { return std::clamp(v, -1.0, 1.0); };
  auto g1 = [&](double v) { return g.G1p(clip(v), lambda); };
  CMat z1 = c.sandwich(g1, x.X1) + c.apply([&](double v) { return g.lower_arc(clip(v), lambda); });
  CMat z2 = -c.sandwich(g1, x.X2);
  CMat z3 = c.apply([&](double v) { return g.G2p(clip(v), lambda); });
  const BasisMap& b = x.basis();
  return {HermitianOperator(b, std::move(z1)), HermitianOperator(b, std::move(z2)), HermitianOperator(b, std::move(z3))};
}

FuzzySphere map_fuzzy_sphere(const FuzzySphere& x, const SphereMapFunctions& g, double lambda) {
  return map_fuzzy_sphere(x, SpectralCalculus(x.X3), g, lambda);
}

HomotopyPoint sphere_signature(const FuzzySphere& x) {
  const auto m = sphere_to_matrix(x);
  ShiftedInertia si(m, m.dim() > 64 ? InertiaBackend::Dense : InertiaBackend::Eigen);
  HomotopyPoint p;
  const Inertia in = si.at(0.0);
  p.half_signature = static_cast<long>(in.pos - in.neg) / 2;
  p.min_abs_eig = si.min_abs_eig();
  return p;
}

std::vector<HomotopyPoint> fuzzy_homotopy(const FuzzySphere& x, const SphereMapFunctions& g, int steps,
                                          bool with_width) {
  if (steps < 2) throw DomainError("homotopy needs at least two points");
  const SpectralCalculus c(x.X3);
  std::vector<HomotopyPoint> out;
  for (int s = 0; s < steps; ++s) {
    const double lambda = double(s) / (steps - 1);
    const auto z = map_fuzzy_sphere(x, c, g, lambda);
    HomotopyPoint p = sphere_signature(z);
    p.lambda = lambda;
    if (with_width) p.width = fuzzy_width(z);
    out.push_back(p);
  }
  return out;
}

}  // namespace sloc
