#include "sloc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "sloc/dirac.hpp"
#include "sloc/linalg/inertia.hpp"

namespace sloc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maximizes f over the torus: grid scan, then compass search from the best
// few grid points.
double torus_max(const std::function<double(double, double)>& f, int nk,
                 std::array<double, 2>* at = nullptr) {
  if (nk < 4) throw DomainError("Bloch grid must have at least 4 points per axis");
  struct Cand {
    double v, x, y;
  };
  std::vector<Cand> grid;
  grid.reserve(static_cast<size_t>(nk) * nk);
  const double h = kTwoPi / nk;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) grid.push_back({f(i * h, j * h), i * h, j * h});
  const size_t keep = std::min<size_t>(6, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + keep, grid.end(),
                    [](const Cand& a, const Cand& b) { return a.v > b.v; });
  Cand best = grid[0];
  for (size_t c = 0; c < keep; ++c) {
    Cand cur = grid[c];
    double step = h;
    while (step > 1e-11) {
      bool moved = false;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          if (!dx && !dy) continue;
          const double x = cur.x + dx * step, y = cur.y + dy * step;
          const double v = f(x, y);
          if (v > cur.v) {
            cur = {v, x, y};
            moved = true;
          }
        }
      if (!moved) step *= 0.5;
    }
    if (cur.v > best.v) best = cur;
  }
  if (at) *at = {std::remainder(best.x, kTwoPi), std::remainder(best.y, kTwoPi)};
  return best.v;
}

}  // namespace

double bloch_gap(const TightBindingModel& model, int nk, std::array<double, 2>* at) {
  Eigen::SelfAdjointEigenSolver<CMat> es;
  auto f = [&](double kx, double ky) {
    es.compute(model.bloch(kx, ky), Eigen::EigenvaluesOnly);
    return -es.eigenvalues().cwiseAbs().minCoeff();
  };
  return -torus_max(f, nk, at);
}

double bloch_norm(const TightBindingModel& model, int nk) {
  Eigen::SelfAdjointEigenSolver<CMat> es;
  auto f = [&](double kx, double ky) {
    es.compute(model.bloch(kx, ky), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  return torus_max(f, nk);
}

double region_gap(const TightBindingModel& model, const RegionPtr& region) {
  const auto h = build_hamiltonian(model, region, Storage::Dense);
  Eigen::SelfAdjointEigenSolver<CMat> es(h.dense());
  const int n = model.internal_dim();
  std::vector<char> edge(static_cast<size_t>(region->size()));
  for (Index s = 0; s < region->size(); ++s) edge[s] = region->boundary_distance(s) <= 2;
  double gap = INFINITY;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    double w = 0.0;
    for (Index s = 0; s < region->size(); ++s)
      if (edge[s]) w += es.eigenvectors().col(k).segment(s * n, n).squaredNorm();
    if (w > 0.5) continue;
    gap = std::min(gap, std::abs(es.eigenvalues()(k)));
  }
  return gap;
}

double commutator_section_norm(const TightBindingModel& model, const RegionPtr& estimation_region,
                               double measured_radius) {
  if (estimation_region->radius() + 1e-12 < measured_radius + model.range())
    throw PreconditionError("commutator estimation region must extend the measured region by the hopping range");
  // D is diagonal, so the compression of [D, H] to the measured sites equals
  // the commutator of the compressions; build on the measured region directly.
  const auto inner = make_region(estimation_region->shape(), measured_radius);
  const auto h = build_hamiltonian(model, inner, Storage::Auto);
  const auto dd = build_dirac(inner);
  const CVec d0 = dd.d0();
  const int n = model.internal_dim();
  const BasisMap basis = h.basis().doubled();
  const Index b = h.dim();
  // i[D, H (+) H] = [[0, -i[D0,H]^*], [i[D0,H], 0]] with [D0,H]_{xy} = (d0_x - d0_y) H_xy.
  const cplx I(0.0, 1.0);
  auto entry = [&](Index i, Index j, cplx v) { return I * (d0(i / n) - d0(j / n)) * v; };
  std::unique_ptr<HermitianOperator> k;
  if (h.is_dense()) {
    CMat m = CMat::Zero(2 * b, 2 * b);
    for (Index j = 0; j < b; ++j)
      for (Index i = 0; i < b; ++i) {
        const cplx c = entry(i, j, h.dense()(i, j));
        m(b + i, j) = c;
        m(j, b + i) = std::conj(c);
      }
    k = std::make_unique<HermitianOperator>(basis, std::move(m));
  } else {
    std::vector<Eigen::Triplet<cplx, Index>> trip;
    const SpMat& s = h.sparse();
    for (Index j = 0; j < s.outerSize(); ++j)
      for (SpMat::InnerIterator it(s, j); it; ++it) {
        const cplx c = entry(it.row(), j, it.value());
        if (c == 0.0) continue;
        trip.emplace_back(b + it.row(), j, c);
        trip.emplace_back(j, b + it.row(), std::conj(c));
      }
    SpMat m(2 * b, 2 * b);
    m.setFromTriplets(trip.begin(), trip.end());
    k = std::make_unique<HermitianOperator>(basis, std::move(m));
  }
  LanczosOptions lo;
  lo.tol = 1e-13;
  return operator_norm(*k, lo);
}

double commutator_symbol_norm(const TightBindingModel& model, int nk) {
  const cplx I(0.0, 1.0);
  Eigen::JacobiSVD<CMat> svd;
  auto f = [&](double kx, double ky) {
    const CMat s = model.position_commutator_symbol(1, kx, ky) + I * model.position_commutator_symbol(2, kx, ky);
    svd.compute(s);
    return svd.singularValues()(0);
  };
  return torus_max(f, nk);
}

SpectralData spectral_data(const TightBindingModel& model, const SpectralOptions& opt) {
  SpectralData sd;
  sd.gap_method = opt.gap_method;
  sd.norm = bloch_norm(model, opt.nk);
  if (opt.gap_method == GapMethod::Bloch) {
    sd.gap = bloch_gap(model, opt.nk, &sd.gap_momentum);
  } else {
    sd.gap = region_gap(model, make_region(Shape::Disc, opt.region_radius));
  }
  if (!(sd.gap > 1e-9 * std::max(1.0, sd.norm)))
    throw NotInsulatorError("Hamiltonian is gapless at zero energy (gap " + std::to_string(sd.gap) + ")");
  sd.commutator_symbol = commutator_symbol_norm(model, opt.nk);
  const double est = opt.section_radius + model.range();
  sd.commutator_section = commutator_section_norm(model, make_region(Shape::Disc, est), opt.section_radius);
  sd.commutator_norm = std::max(sd.commutator_section, sd.commutator_symbol);
  return sd;
}

}  // namespace sloc
