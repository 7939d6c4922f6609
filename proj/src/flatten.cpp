#include "sloc/flatten.hpp"

#include <cmath>
#include <numbers>

namespace sloc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BlochFlat {
  std::map<Displacement, CMat> hop;
  int radius = 0;
  double tail = 0.0;
};

// Inverse transform of sign(H(k)) on an nk x nk grid, truncated where the
// remaining tail drops below tol.
BlochFlat flat_hoppings(const TightBindingModel& model, int nk, double tol) {
  const int n = model.internal_dim();
  const Index nn = static_cast<Index>(n) * n;
  // S[(i*nk + j)] holds sign(H(k_i, k_j)) column-major flattened.
  Eigen::MatrixXcd S(nn, static_cast<Index>(nk) * nk);
  Eigen::SelfAdjointEigenSolver<CMat> es;
  double minabs = INFINITY;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      es.compute(model.bloch(kTwoPi * i / nk, kTwoPi * j / nk));
      const RVec& w = es.eigenvalues();
      minabs = std::min(minabs, w.cwiseAbs().minCoeff());
      const CMat s = es.eigenvectors() * w.array().sign().matrix().asDiagonal() * es.eigenvectors().adjoint();
      S.col(static_cast<Index>(i) * nk + j) = Eigen::Map<const CVec>(s.data(), nn);
    }
  if (!(minabs > 1e-9)) throw NotInsulatorError("Bloch Hamiltonian is gapless on the flattening grid");

  // t_d = nk^-2 sum_k S(k) exp(+i k.d), separable in x and y.
  CMat ph(nk, nk);
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) ph(a, b) = std::polar(1.0 / nk, kTwoPi * double(a) * b / nk);
  Eigen::MatrixXcd T(nn, static_cast<Index>(nk) * nk);  // index dx_mod * nk + dy_mod
  CMat tmp(nn, static_cast<Index>(nk) * nk);
  // along y: tmp[i, dy] = sum_j S[i, j] ph(j, dy)
  for (int i = 0; i < nk; ++i)
    tmp.middleCols(static_cast<Index>(i) * nk, nk).noalias() = S.middleCols(static_cast<Index>(i) * nk, nk) * ph;
  // along x
  for (int dx = 0; dx < nk; ++dx) {
    auto out = T.middleCols(static_cast<Index>(dx) * nk, nk);
    out.setZero();
    for (int i = 0; i < nk; ++i) out += ph(i, dx) * tmp.middleCols(static_cast<Index>(i) * nk, nk);
  }

  const int half = nk / 2;
  std::vector<double> shell(static_cast<size_t>(half + 1), 0.0);
  auto wrap = [&](int d) { return ((d % nk) + nk) % nk; };
  for (int dx = -half + 1; dx < half; ++dx)
    for (int dy = -half + 1; dy < half; ++dy) {
      const int r = std::max(std::abs(dx), std::abs(dy));
      shell[r] += T.col(static_cast<Index>(wrap(dx)) * nk + wrap(dy)).norm();
    }
  BlochFlat out;
  double tail = 0.0;
  int radius = half - 1;
  for (int r = half - 1; r >= 0; --r) {
    if (tail + shell[r] >= tol) break;
    tail += shell[r];
    radius = r - 1;
  }
  out.radius = std::max(radius, 0);
  out.tail = tail;
  for (int dx = -out.radius; dx <= out.radius; ++dx)
    for (int dy = -out.radius; dy <= out.radius; ++dy) {
      const CVec c = T.col(static_cast<Index>(wrap(dx)) * nk + wrap(dy));
      CMat t = Eigen::Map<const CMat>(c.data(), n, n);
      if (t.cwiseAbs().maxCoeff() == 0.0) continue;
      out.hop[{dx, dy}] = t;
    }
  // Symmetrize exactly so the truncated model is Hermitian.
  for (auto& [d, t] : out.hop) {
    if (d < -d) {
      const CMat avg = 0.5 * (t + CMat(out.hop[-d].adjoint()));
      t = avg;
      out.hop[-d] = avg.adjoint();
    } else if (d == -d) {
      t = 0.5 * (t + CMat(t.adjoint()));
    }
  }
  return out;
}

}  // namespace

CMat matrix_sign(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const RVec s = es.eigenvalues().array().sign();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

HermitianOperator FlatHamiltonian::on(const RegionPtr& region, Storage storage) const {
  if (model) return build_hamiltonian(*model, region, storage);
  if (matrix->basis().region->same_sites(*region)) return *matrix;
  return matrix->restrict_to(region);
}

FlatHamiltonian flatten(const TightBindingModel& model, const FlattenOptions& opt,
                        const RegionPtr& region) {
  FlatHamiltonian f;
  f.method = opt.method;
  if (opt.method == FlattenMethod::Dense) {
    if (!region) throw PreconditionError("dense flattening needs a region");
    auto h = build_hamiltonian(model, region, Storage::Dense);
    Eigen::SelfAdjointEigenSolver<CMat> es(h.dense(), Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().cwiseAbs().minCoeff() > 1e-9))
      throw NotInsulatorError("region Hamiltonian has a zero eigenvalue");
    f.matrix = HermitianOperator(h.basis(), matrix_sign(h.dense()));
    f.boundary_inexact = true;
    f.truncation_radius = 2 * region->extent();
    return f;
  }
  if (opt.nk < 8 || opt.max_nk < opt.nk) throw DomainError("invalid flattening grid");
  for (int nk = opt.nk; nk <= opt.max_nk; nk *= 2) {
    BlochFlat b = flat_hoppings(model, nk, opt.tail_tol);
    if (4 * b.radius >= nk) continue;
    f.model = TightBindingModel(model.internal_dim(), std::move(b.hop));
    f.truncation_radius = b.radius;
    f.tail_norm = b.tail;
    f.nk = nk;
    return f;
  }
  throw ResolutionError("flattened hopping range exceeds a quarter of the largest Bloch grid (" +
                        std::to_string(opt.max_nk) + "); gap too small for the requested tolerance");
}

TightBindingModel interpolate_flatten(const TightBindingModel& model, const TightBindingModel& flat,
                                      double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("interpolation parameter must lie in [0,1]");
  if (model.internal_dim() != flat.internal_dim()) throw ModelError("internal dimensions differ");
  std::map<Displacement, CMat> h;
  for (const auto& [d, t] : model.hoppings()) h[d] = (1.0 - lambda) * t;
  for (const auto& [d, t] : flat.hoppings()) {
    auto it = h.find(d);
    if (it == h.end()) h[d] = lambda * t;
    else it->second += lambda * t;
  }
  return {model.internal_dim(), std::move(h)};
}

}  // namespace sloc
