#include "sloc/linalg/inertia.hpp"

#include <cmath>

namespace sloc {

namespace {

constexpr Index kDenseLimit = 4000;
constexpr Index kEigenLimit = 9000;

}  // namespace

InertiaBackend parse_backend(const std::string& s) {
  if (s == "auto") return InertiaBackend::Auto;
  if (s == "dense" || s == "factorization") return InertiaBackend::Dense;
  if (s == "sparse") return InertiaBackend::Sparse;
  if (s == "eigen") return InertiaBackend::Eigen;
  throw ConfigError("unknown inertia backend '" + s + "'");
}

std::string to_string(InertiaBackend b) {
  switch (b) {
    case InertiaBackend::Dense: return "dense";
    case InertiaBackend::Sparse: return "sparse";
    case InertiaBackend::Eigen: return "eigen";
    default: return "auto";
  }
}

std::shared_ptr<const SymbolicAnalysis> analyze_lattice(const SpMat& a, const BasisMap& basis) {
  std::vector<Index> group(static_cast<size_t>(basis.dim()));
  const Index blk = basis.block();
  for (Index i = 0; i < basis.dim(); ++i) group[i] = (i % blk) / basis.internal_dim;
  return std::make_shared<const SymbolicAnalysis>(a, group, basis.region->sites());
}

ShiftedInertia::ShiftedInertia(const HermitianOperator& a, InertiaBackend backend)
    : a_(a), backend_(backend) {
  if (backend_ == InertiaBackend::Auto) {
    const bool sparse_ok = !a.is_dense() && a.nonzeros() < 0.05 * double(a.dim()) * a.dim();
    backend_ = (a.dim() > kDenseLimit && sparse_ok) ? InertiaBackend::Sparse : InertiaBackend::Dense;
    if (a.dim() <= 64) backend_ = InertiaBackend::Eigen;
  }
  if (backend_ == InertiaBackend::Sparse) sym_ = analyze_lattice(a.to_sparse(), a.basis());
}

const RVec& ShiftedInertia::eigenvalues() const {
  if (!eig_) eig_ = std::make_unique<RVec>(hermitian_eigenvalues(a_));
  return *eig_;
}

Inertia ShiftedInertia::at(double shift, bool* breakdown) const {
  if (breakdown) *breakdown = false;
  if (backend_ == InertiaBackend::Eigen) {
    Inertia in;
    for (double l : eigenvalues()) (l > shift ? in.pos : l < shift ? in.neg : in.zero) += 1;
    return in;
  }
  if (backend_ == InertiaBackend::Dense) {
    CMat m = a_.to_dense();
    if (shift != 0.0) m.diagonal().array() -= shift;
    DenseLdlt f(std::move(m));
    if (breakdown) *breakdown = f.breakdown();
    return f.inertia();
  }
  SparseLdlt f(sym_, a_.is_dense() ? a_.to_sparse() : a_.sparse(), shift, false);
  if (breakdown) *breakdown = f.breakdown();
  return f.inertia();
}

InertiaResult ShiftedInertia::counts(double tol) const {
  InertiaResult r;
  r.zero_tol = tol;
  r.backend = backend_;
  if (backend_ == InertiaBackend::Eigen) {
    for (double l : eigenvalues()) (l > tol ? r.n_plus : l < -tol ? r.n_minus : r.n_zero) += 1;
    return r;
  }
  bool b1 = false, b2 = false;
  const Inertia up = at(tol, &b1);
  const Inertia lo = tol == 0.0 ? up : at(-tol, &b2);
  if (b1 || b2) {
    if (a_.dim() > kEigenLimit) throw ResolutionError("singular pivot in inertia factorization");
    r.fell_back = true;
    for (double l : eigenvalues()) (l > tol ? r.n_plus : l < -tol ? r.n_minus : r.n_zero) += 1;
    return r;
  }
  r.n_plus = up.pos;
  r.n_minus = lo.neg;
  r.n_zero = a_.dim() - r.n_plus - r.n_minus;
  return r;
}

Index ShiftedInertia::count_open(double lo, double hi) const {
  // #(lambda < hi) - #(lambda <= lo)
  const Inertia h = at(hi);
  const Inertia l = at(lo);
  return h.neg - (l.neg + l.zero);
}

double ShiftedInertia::min_abs_eig(const LanczosOptions& opt) const {
  const Index n = a_.dim();
  if (backend_ == InertiaBackend::Eigen || n <= 400) return eigenvalues().cwiseAbs().minCoeff();
  LanczosOptions o = opt;
  o.tol = std::max(o.tol, 1e-10);
  if (backend_ == InertiaBackend::Dense) {
    DenseLdlt f(a_.to_dense());
    if (f.breakdown()) return 0.0;
    auto r = lanczos_extremal([&](const CVec& x, CVec& y) { y = x; f.solve_in_place(y); }, n, o);
    return 1.0 / std::max(std::abs(r.min_eig), std::abs(r.max_eig));
  }
  SparseLdlt f(sym_, a_.is_dense() ? a_.to_sparse() : a_.sparse(), 0.0, true);
  if (f.breakdown()) return 0.0;
  auto r = lanczos_extremal([&](const CVec& x, CVec& y) { y = x; f.solve_in_place(y); }, n, o);
  return 1.0 / std::max(std::abs(r.min_eig), std::abs(r.max_eig));
}

InertiaResult inertia(const HermitianOperator& a, double zero_tol, InertiaBackend backend) {
  return ShiftedInertia(a, backend).counts(zero_tol);
}

RVec hermitian_eigenvalues(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double operator_norm(const HermitianOperator& a, const LanczosOptions& opt) {
  if (a.dim() <= 200) return hermitian_eigenvalues(a).cwiseAbs().maxCoeff();
  return hermitian_norm([&](const CVec& x, CVec& y) { a.apply(x, y); }, a.dim(), opt);
}

}  // namespace sloc
