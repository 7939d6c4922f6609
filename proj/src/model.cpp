#include "sloc/model.hpp"

#include <cmath>
#include <cstdlib>

namespace sloc {

namespace {

const cplx I(0.0, 1.0);

CMat pauli(int j) {
  CMat s(2, 2);
  switch (j) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

int Displacement::max_norm() const { return std::max(std::abs(dx), std::abs(dy)); }

TightBindingModel::TightBindingModel(int internal_dim, std::map<Displacement, CMat> hoppings)
    : n_(internal_dim) {
  if (internal_dim < 1) throw ModelError("internal dimension must be positive");
  constexpr double tol = 1e-12;
  for (auto& [d, t] : hoppings) {
    if (t.rows() != n_ || t.cols() != n_)
      throw ModelError("hopping matrix has wrong shape at (" + std::to_string(d.dx) + "," +
                       std::to_string(d.dy) + ")");
  }
  for (const auto& [d, t] : hoppings) {
    auto it = hoppings.find(-d);
    if (it == hoppings.end()) {
      hop_[d] = t;
      hop_[-d] = t.adjoint();
      continue;
    }
    if ((it->second - t.adjoint()).cwiseAbs().maxCoeff() > tol * std::max(1.0, t.cwiseAbs().maxCoeff()))
      throw ModelError("hoppings violate t(-d) = t(d)^* at (" + std::to_string(d.dx) + "," +
                       std::to_string(d.dy) + ")");
    hop_[d] = t;
  }
  // Exact Hermiticity after validation.
  for (auto& [d, t] : hop_) {
    if (d < -d) continue;
    if (d == -d) {
      t = 0.5 * (t + CMat(t.adjoint()));
    } else {
      hop_[-d] = t.adjoint();
    }
  }
  for (const auto& [d, t] : hop_)
    if (t.cwiseAbs().maxCoeff() > 0.0) range_ = std::max(range_, d.max_norm());
}

TightBindingModel TightBindingModel::qwz(double m) {
  std::map<Displacement, CMat> h;
  h[{0, 0}] = m * pauli(3);
  h[{1, 0}] = 0.5 * (pauli(3) + I * pauli(1));
  h[{0, 1}] = 0.5 * (pauli(3) + I * pauli(2));
  return {2, std::move(h)};
}

TightBindingModel TightBindingModel::constant(int internal_dim, double c) {
  std::map<Displacement, CMat> h;
  h[{0, 0}] = c * CMat::Identity(internal_dim, internal_dim);
  return {internal_dim, std::move(h)};
}

CMat TightBindingModel::bloch(double kx, double ky) const {
  CMat h = CMat::Zero(n_, n_);
  for (const auto& [d, t] : hop_) h += std::exp(-I * (kx * d.dx + ky * d.dy)) * t;
  return h;
}

CMat TightBindingModel::position_commutator_symbol(int j, double kx, double ky) const {
  CMat h = CMat::Zero(n_, n_);
  for (const auto& [d, t] : hop_) {
    const double w = j == 1 ? d.dx : d.dy;
    if (w != 0.0) h += w * std::exp(-I * (kx * d.dx + ky * d.dy)) * t;
  }
  return h;
}

TightBindingModel TightBindingModel::scaled(double s) const {
  auto h = hop_;
  for (auto& [d, t] : h) t *= s;
  return {n_, std::move(h)};
}

HermitianOperator build_hamiltonian(const TightBindingModel& model, const RegionPtr& region,
                                    Storage storage) {
  const int n = model.internal_dim();
  BasisMap basis{region, n, 1};
  const Index dim = basis.dim();
  const double fill = double(model.hoppings().size()) * n * n / double(std::max<Index>(dim, 1));
  const bool dense = storage == Storage::Dense || (storage == Storage::Auto && (fill > 0.1 || dim <= 256));
  if (dense) {
    CMat h = CMat::Zero(dim, dim);
    for (Index j = 0; j < region->size(); ++j) {
      const Site& s = region->site(j);
      for (const auto& [d, t] : model.hoppings()) {
        const Index i = region->index(s.x + d.dx, s.y + d.dy);
        if (i >= 0) h.block(i * n, j * n, n, n) = t;
      }
    }
    return {basis, std::move(h)};
  }
  std::vector<Eigen::Triplet<cplx, Index>> trip;
  trip.reserve(static_cast<size_t>(region->size()) * model.hoppings().size() * n * n);
  for (Index j = 0; j < region->size(); ++j) {
    const Site& s = region->site(j);
    for (const auto& [d, t] : model.hoppings()) {
      const Index i = region->index(s.x + d.dx, s.y + d.dy);
      if (i < 0) continue;
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
          if (t(a, b) != 0.0) trip.emplace_back(i * n + a, j * n + b, t(a, b));
    }
  }
  SpMat h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return {basis, std::move(h)};
}

}  // namespace sloc
