#pragma once

#include <memory>
#include <vector>

#include "sloc/linalg/bunch_kaufman.hpp"
#include "sloc/region.hpp"
#include "sloc/types.hpp"

namespace sloc {

// Nested-dissection elimination tree for a Hermitian matrix whose variables
// are grouped on lattice sites. Independent of the numerical values, so one
// analysis serves every shift of the same pattern.
class SymbolicAnalysis {
 public:
  // `group_of_var[i]` is the site of variable i; `coords[g]` its position.
  SymbolicAnalysis(const SpMat& pattern, const std::vector<Index>& group_of_var,
                   const std::vector<Site>& coords, int leaf_groups = 24);

  struct Node {
    std::vector<Index> vars;    // eliminated here, in elimination order
    std::vector<Index> update;  // ancestor variables touched, in elimination order
    std::vector<int> children;
  };

  const std::vector<Node>& nodes() const { return nodes_; }  // postorder
  Index dim() const { return n_; }
  // Estimated factor entries and flops (complex multiply-adds).
  double factor_entries() const;
  double factor_flops() const;

 private:
  Index n_ = 0;
  std::vector<Node> nodes_;
};

class SparseLdlt {
 public:
  // Factors a - shift * 1. Factors are kept only when `keep_factors` is set.
  SparseLdlt(std::shared_ptr<const SymbolicAnalysis> sym, const SpMat& a, double shift = 0.0,
             bool keep_factors = false);

  Inertia inertia() const { return inertia_; }
  bool breakdown() const { return breakdown_; }
  void solve_in_place(CVec& x) const;

 private:
  std::shared_ptr<const SymbolicAnalysis> sym_;
  Inertia inertia_;
  bool breakdown_ = false;
  bool kept_ = false;
  std::vector<CMat> factors_;  // per node: front columns of eliminated variables
  std::vector<BkPivots> pivots_;
};

}  // namespace sloc
