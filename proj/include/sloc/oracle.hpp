#pragma once

#include <vector>

#include "sloc/flatten.hpp"
#include "sloc/fuzzy.hpp"
#include "sloc/model.hpp"
#include "sloc/sphere_map.hpp"
#include "sloc/taper.hpp"

namespace sloc {

// Orientation factor applied to the raw link-variable sum so that the Chern
// number of QWZ at m = 1 equals the localizer half-signature (+1).
inline constexpr int kChernOrientation = 1;

struct ChernResult {
  long chern = 0;
  double raw = 0.0;       // oriented plaquette sum / 2pi before rounding
  double residual = 0.0;  // |raw - chern|
  int nk = 0;
  int occupied = 0;
};

// Link-variable Chern number of the negative-energy bands on an nk x nk grid.
ChernResult chern_number(const TightBindingModel& model, int nk);

// Same from occupied frames: frames[i * nk + j] spans the occupied space at
// k = 2pi (i, j) / nk (columns need only be a basis).
ChernResult chern_from_frames(const std::vector<CMat>& frames, int nk);

struct FredholmOptions {
  double box_radius = 16.0;      // square truncation box
  double threshold = 1e-3;       // relative to ||T|| <= 1
  double interior_fraction = 0.5;  // inner box radius, as a fraction of box_radius
  FlattenOptions flatten{};
};

struct FredholmEstimate {
  Index dim_ker_T = 0;       // interior-localized near-kernel of T
  Index dim_ker_Tstar = 0;   // interior-localized near-kernel of T^*
  long index = 0;            // dim_ker_T - dim_ker_Tstar
  Index boundary_ker_T = 0;  // near-kernel vectors living on the box boundary
  Index boundary_ker_Tstar = 0;
  double threshold = 0.0;
  double largest_counted = 0.0;     // largest singular value below threshold
  double smallest_uncounted = 0.0;  // smallest singular value above threshold
  double separation = 0.0;          // smallest_uncounted / max(largest_counted, threshold / 10)
  double worst_localization = 0.0;  // distance of interior weights from {0, 1}, worst case
  bool reliable = false;
  std::vector<double> smallest_singular_values;
};

// Noether index of T = P F P + (1 - P) with P = chi(H < 0) from the flattened
// Hamiltonian and F the Dirac phase, both compressed to a square box; P is
// re-projected on the box and near-kernels are counted only when localized
// in the inner part of the box.
FredholmEstimate fredholm_index_estimate(const TightBindingModel& model, const FredholmOptions& opt = {});
FredholmEstimate fredholm_index_estimate(const FlatHamiltonian& flat, const FredholmOptions& opt = {});

struct IndexSphereOptions {
  // Use the positive spectral projection 1 - P in place of P (diagnostic).
  bool positive_projection = false;
};

// (Y'1, Y'2, Y'3) on the region of `flat_h`, with P = (1 - H)/2:
// Y'1 = P G1(f^2)^2 f^2 R^-1 D1 P + (1-P) G1(f^2)^2 f^2 (1-P),
// Y'2 = -P G1(f^2)^2 f^2 R^-1 D2 P,  Y'3 = G2(f^2),  f = f_rho(R).
FuzzySphere build_index_sphere(const HermitianOperator& flat_h, const TaperPair& taper,
                               const SphereMapFunctions& g, double rho, const IndexSphereOptions& opt = {});

// ||[A1, A2]|| for the lift A1 = P f^2 R^-1 D1 P + (1-P) f^2 (1-P),
// A2 = P f^2 R^-1 D2 P on a region padded by `pad` sites, measured on the
// inner disc of radius rho + pad / 2. Diagnostic only.
double lift_commutator_norm(const TightBindingModel& flat_model, const TaperPair& taper, double rho, double pad);

struct SphereComparison {
  double dev[3] = {0, 0, 0};
  double max_dev = 0.0;
  long half_signature_a = 0;
  long half_signature_b = 0;
  double min_abs_eig_a = 0.0;
  double min_abs_eig_b = 0.0;
};

SphereComparison compare_spheres(const FuzzySphere& a, const FuzzySphere& b);

}  // namespace sloc
