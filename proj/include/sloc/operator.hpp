#pragma once

#include <variant>

#include "sloc/region.hpp"
#include "sloc/types.hpp"

namespace sloc {

// Basis of C^spinor ⊗ l2(region) ⊗ C^internal with the spinor index
// outermost: idx = s * (sites * internal) + site * internal + a.
struct BasisMap {
  RegionPtr region;
  int internal_dim = 1;
  int spinor_dim = 1;

  Index sites() const { return region->size(); }
  Index block() const { return sites() * internal_dim; }
  Index dim() const { return block() * spinor_dim; }
  Index index(int s, Index site, int a) const { return s * block() + site * internal_dim + a; }
  bool compatible(const BasisMap& o) const;
  BasisMap doubled() const { return {region, internal_dim, 2 * spinor_dim}; }
};

class HermitianOperator {
 public:
  HermitianOperator(BasisMap basis, CMat dense);
  HermitianOperator(BasisMap basis, SpMat sparse);

  const BasisMap& basis() const { return basis_; }
  Index dim() const { return basis_.dim(); }
  bool is_dense() const { return std::holds_alternative<CMat>(data_); }
  const CMat& dense() const { return std::get<CMat>(data_); }
  const SpMat& sparse() const { return std::get<SpMat>(data_); }

  CMat to_dense() const;
  SpMat to_sparse() const;
  Index nonzeros() const;

  // y = A x
  void apply(const CVec& x, CVec& y) const;
  double hermiticity_defect() const;
  // Largest absolute row sum; an upper bound for the operator norm.
  double inf_norm() const;

  // Compression onto the sites of a sub-region (same internal/spinor).
  HermitianOperator restrict_to(const RegionPtr& sub) const;

 private:
  BasisMap basis_;
  std::variant<CMat, SpMat> data_;
};

// Index list of the basis vectors of `sub` inside `full` (same internal and
// spinor structure); throws BasisMismatchError when sub is not contained.
std::vector<Index> embedding(const BasisMap& full, const Region& sub);

}  // namespace sloc
