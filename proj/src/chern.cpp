#include "sloc/oracle.hpp"

#include <cmath>
#include <numbers>

namespace sloc {

ChernResult chern_from_frames(const std::vector<CMat>& frames, int nk) {
  if (nk < 3) throw DomainError("Chern grid must have at least 3 points per axis");
  if (frames.size() != static_cast<size_t>(nk) * nk) throw DomainError("frame grid has wrong size");
  auto fr = [&](int i, int j) -> const CMat& {
    return frames[static_cast<size_t>((i % nk + nk) % nk) * nk + (j % nk + nk) % nk];
  };
  auto link = [](const CMat& a, const CMat& b) {
    const cplx d = (a.adjoint() * b).determinant();
    return d / std::abs(d);
  };
  double total = 0.0;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      const cplx u = link(fr(i, j), fr(i + 1, j)) * link(fr(i + 1, j), fr(i + 1, j + 1)) *
                     std::conj(link(fr(i, j + 1), fr(i + 1, j + 1))) * std::conj(link(fr(i, j), fr(i, j + 1)));
      total += std::arg(u);
    }
  ChernResult r;
  r.nk = nk;
  r.occupied = static_cast<int>(frames.front().cols());
  r.raw = kChernOrientation * total / (2.0 * std::numbers::pi);
  r.chern = std::lround(r.raw);
  r.residual = std::abs(r.raw - double(r.chern));
  return r;
}

ChernResult chern_number(const TightBindingModel& model, int nk) {
  if (nk < 3) throw DomainError("Chern grid must have at least 3 points per axis");
  std::vector<CMat> frames(static_cast<size_t>(nk) * nk);
  Eigen::SelfAdjointEigenSolver<CMat> es;
  long occ = -1;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      es.compute(model.bloch(2.0 * std::numbers::pi * i / nk, 2.0 * std::numbers::pi * j / nk));
      const RVec& w = es.eigenvalues();
      if (w.cwiseAbs().minCoeff() < 1e-9) throw NotInsulatorError("Bloch Hamiltonian is gapless on the Chern grid");
      const long m = (w.array() < 0.0).count();
      if (occ >= 0 && m != occ) throw NotInsulatorError("number of occupied bands changes across the zone");
      occ = m;
      frames[static_cast<size_t>(i) * nk + j] = es.eigenvectors().leftCols(m);
    }
  if (occ == 0) {
    ChernResult r;
    r.nk = nk;
    return r;
  }
  return chern_from_frames(frames, nk);
}

}  // namespace sloc
