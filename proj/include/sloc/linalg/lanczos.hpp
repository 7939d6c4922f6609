#pragma once

#include <cstdint>
#include <functional>

#include "sloc/types.hpp"

namespace sloc {

using MatVec = std::function<void(const CVec& x, CVec& y)>;

struct LanczosOptions {
  int max_iter = 300;
  double tol = 1e-12;  // relative residual of the extremal Ritz pairs
  std::uint64_t seed = 0x5eed;
};

struct LanczosResult {
  double min_eig = 0.0;
  double max_eig = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

// Extremal eigenvalues of a Hermitian operator given by its action.
// Full reorthogonalization; exact once the Krylov space is invariant.
LanczosResult lanczos_extremal(const MatVec& op, Index n, const LanczosOptions& opt = {});

// max |eig| of a Hermitian operator.
double hermitian_norm(const MatVec& op, Index n, const LanczosOptions& opt = {});

}  // namespace sloc
