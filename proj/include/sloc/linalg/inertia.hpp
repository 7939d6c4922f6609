#pragma once

#include <memory>
#include <string>

#include "sloc/linalg/bunch_kaufman.hpp"
#include "sloc/linalg/lanczos.hpp"
#include "sloc/linalg/multifrontal.hpp"
#include "sloc/operator.hpp"

namespace sloc {

enum class InertiaBackend { Auto, Dense, Sparse, Eigen };

InertiaBackend parse_backend(const std::string& s);
std::string to_string(InertiaBackend b);

struct InertiaResult {
  Index n_plus = 0;   // eigenvalues > tol
  Index n_minus = 0;  // eigenvalues < -tol
  Index n_zero = 0;   // |eigenvalue| <= tol
  double zero_tol = 0.0;
  InertiaBackend backend = InertiaBackend::Auto;
  bool fell_back = false;  // factorization broke down; eigenvalues used instead
  long half_signature_twice() const { return static_cast<long>(n_plus - n_minus); }
};

// Factorizations of A - shift for one Hermitian operator, sharing symbolic
// work across shifts. Inertia follows from Sylvester's law.
class ShiftedInertia {
 public:
  explicit ShiftedInertia(const HermitianOperator& a, InertiaBackend backend = InertiaBackend::Auto);

  InertiaBackend backend() const { return backend_; }
  // Exact pivot inertia of A - shift; sets `breakdown` when a zero pivot occurred.
  Inertia at(double shift, bool* breakdown = nullptr) const;
  // Eigenvalue counts with |lambda| <= tol reported as zero.
  InertiaResult counts(double tol) const;
  // Number of eigenvalues in the open interval (lo, hi).
  Index count_open(double lo, double hi) const;
  // Smallest |eigenvalue| by Lanczos on A^{-1}.
  double min_abs_eig(const LanczosOptions& opt = {}) const;

 private:
  const HermitianOperator& a_;
  InertiaBackend backend_;
  std::shared_ptr<const SymbolicAnalysis> sym_;
  mutable std::unique_ptr<RVec> eig_;
  const RVec& eigenvalues() const;
};

InertiaResult inertia(const HermitianOperator& a, double zero_tol,
                      InertiaBackend backend = InertiaBackend::Auto);

// All eigenvalues of a Hermitian operator (dense path); for cross-checks.
RVec hermitian_eigenvalues(const HermitianOperator& a);

// Operator norm of a Hermitian operator (Lanczos, exact for small sizes).
double operator_norm(const HermitianOperator& a, const LanczosOptions& opt = {});

std::shared_ptr<const SymbolicAnalysis> analyze_lattice(const SpMat& a, const BasisMap& basis);

}  // namespace sloc
