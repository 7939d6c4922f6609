#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

#include "sloc/linalg/inertia.hpp"
#include "sloc/operator.hpp"
#include "sloc/sphere_map.hpp"
#include "sloc/taper.hpp"

namespace sloc {

// Three Hermitian operators on one basis (spinor_dim 1).
struct FuzzySphere {
  HermitianOperator X1, X2, X3;
  const BasisMap& basis() const { return X1.basis(); }
  Index dim() const { return X1.dim(); }
};

struct WidthParts {
  double sum_squares = 0.0;  // ||1 - X1^2 - X2^2 - X3^2||
  double c12 = 0.0, c13 = 0.0, c23 = 0.0;  // ||[Xi, Xj]||
  double width() const { return std::max({sum_squares, c12, c13, c23}); }
};

WidthParts fuzzy_width_parts(const FuzzySphere& x, const LanczosOptions& opt = {});
double fuzzy_width(const FuzzySphere& x, const LanczosOptions& opt = {});

// X1 (x) s1 + X2 (x) s2 + X3 (x) s3 = [[X3, X1 - i X2], [X1 + i X2, -X3]].
HermitianOperator sphere_to_matrix(const FuzzySphere& x);

// X1,2 = f_rho(R)^2 R^{-1} D_{1,2}, X3 = F_rho(R) H F_rho(R) for a flat H on a region.
FuzzySphere build_fuzzy_sphere(const HermitianOperator& flat_h, const TaperPair& taper, double rho);

// Sphere along the deformation from kappa D + H (x) s3 (lambda = 0) to the
// tapered sphere above (lambda = 1).
FuzzySphere localizer_sphere_homotopy(const HermitianOperator& flat_h, const TaperPair& taper, double kappa,
                                      double rho, double lambda);

// Functions of a Hermitian matrix through one eigendecomposition.
class SpectralCalculus {
 public:
  explicit SpectralCalculus(const HermitianOperator& a);
  const RVec& eigenvalues() const { return w_; }
  CMat apply(const std::function<double(double)>& f) const;
  // G X G for a diagonal or dense X, with G = g(A).
  CMat sandwich(const std::function<double(double)>& g, const HermitianOperator& x) const;

 private:
  CMat v_;
  RVec w_;
};

// (Z1, Z2, Z3) for the lambda-deformed sphere map applied to X; spectra of X3
// are clipped to [-1, 1] after checking they exceed it by at most 1e-8.
FuzzySphere map_fuzzy_sphere(const FuzzySphere& x, const SphereMapFunctions& g, double lambda = 1.0);
FuzzySphere map_fuzzy_sphere(const FuzzySphere& x, const SpectralCalculus& x3, const SphereMapFunctions& g,
                             double lambda);

struct HomotopyPoint {
  double lambda = 0.0;
  double min_abs_eig = 0.0;
  long half_signature = 0;
  double width = NAN;
};

// Scans lambda over [0,1] with `steps` points for Z_lambda.
std::vector<HomotopyPoint> fuzzy_homotopy(const FuzzySphere& x, const SphereMapFunctions& g, int steps,
                                          bool with_width = false);

// Half-signature and min |eig| of a sphere's matrix.
HomotopyPoint sphere_signature(const FuzzySphere& x);

}  // namespace sloc
