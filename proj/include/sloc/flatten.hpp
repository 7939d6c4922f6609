#pragma once

#include <optional>

#include "sloc/model.hpp"

namespace sloc {

enum class FlattenMethod { Bloch, Dense };

struct FlattenOptions {
  FlattenMethod method = FlattenMethod::Bloch;
  double tail_tol = 1e-10;  // bound on the sum of dropped hopping norms
  int nk = 64;
  int max_nk = 512;
};

// 1 - 2P with P = chi(H < 0).
struct FlatHamiltonian {
  FlattenMethod method = FlattenMethod::Bloch;
  // Bloch method: truncated flattened hoppings, exact up to `tail_norm` in norm.
  std::optional<TightBindingModel> model;
  int truncation_radius = 0;
  double tail_norm = 0.0;
  int nk = 0;
  // Dense method: sign function of the region-restricted Hamiltonian.
  std::optional<HermitianOperator> matrix;
  bool boundary_inexact = false;

  HermitianOperator on(const RegionPtr& region, Storage storage = Storage::Auto) const;
};

FlatHamiltonian flatten(const TightBindingModel& model, const FlattenOptions& opt = {},
                        const RegionPtr& region = nullptr);

// (1 - lambda) H + lambda (1 - 2P), hopping by hopping.
TightBindingModel interpolate_flatten(const TightBindingModel& model, const TightBindingModel& flat,
                                      double lambda);

// Sign function of a Hermitian matrix by eigendecomposition.
CMat matrix_sign(const CMat& h);

}  // namespace sloc
