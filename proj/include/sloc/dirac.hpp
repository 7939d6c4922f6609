#pragma once

#include "sloc/operator.hpp"

namespace sloc {

// Diagonal data of the shifted position operators D1 = X1 + |0><0|, D2 = X2
// on a region: D0 = D1 + i D2, R = |D0|, F = D0 / R.
struct DiracData {
  RegionPtr region;
  RVec d1, d2, r;
  CVec phase;

  CVec d0() const;
  Index sites() const { return region->size(); }
};

DiracData build_dirac(const RegionPtr& region);

// D = [[0, D0^*], [D0, 0]] acting on the doubled space of `internal_dim`.
HermitianOperator dirac_operator(const DiracData& d, int internal_dim);

// Compression of an operator to a sub-region.
HermitianOperator truncate(const HermitianOperator& op, const RegionPtr& region);

// Expands a per-site diagonal to site (x) internal.
RVec per_orbital(const RVec& site_values, int internal_dim);
CVec per_orbital(const CVec& site_values, int internal_dim);

}  // namespace sloc
