#pragma once

#include <array>
#include <string>

#include "sloc/model.hpp"

namespace sloc {

enum class GapMethod { Bloch, Region };

struct SpectralOptions {
  GapMethod gap_method = GapMethod::Bloch;
  int nk = 128;                 // Bloch grid before local refinement
  double region_radius = 12.0;  // region used by the region gap method
  double section_radius = 12.0; // commutator finite-section radius
};

struct SpectralData {
  double gap = 0.0;               // dist(0, spec H)
  double norm = 0.0;              // ||H||
  double commutator_norm = 0.0;   // max(section, symbol)
  double commutator_section = 0.0;
  double commutator_symbol = 0.0;
  GapMethod gap_method = GapMethod::Bloch;
  std::array<double, 2> gap_momentum{0.0, 0.0};
};

// min_k dist(0, spec H(k)); optionally returns the minimizing momentum.
double bloch_gap(const TightBindingModel& model, int nk, std::array<double, 2>* at = nullptr);
double bloch_norm(const TightBindingModel& model, int nk);

// Gap of the region-restricted Hamiltonian, ignoring eigenvectors with more
// than half their weight within two sites of the region boundary.
double region_gap(const TightBindingModel& model, const RegionPtr& region);

// ||[D, H (x) 1]|| restricted to sites within `measured_radius`, using H built
// on `estimation_region`, which must extend at least model.range() further.
double commutator_section_norm(const TightBindingModel& model, const RegionPtr& estimation_region,
                               double measured_radius);

// sup_k ||S_1(k) + i S_2(k)||, the norm of the translation-invariant part of [D_0, H].
double commutator_symbol_norm(const TightBindingModel& model, int nk);

// Throws NotInsulatorError when the gap vanishes.
SpectralData spectral_data(const TightBindingModel& model, const SpectralOptions& opt = {});

}  // namespace sloc
