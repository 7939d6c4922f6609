#pragma once

#include <vector>

#include "sloc/types.hpp"

namespace sloc {

struct Inertia {
  Index pos = 0;
  Index neg = 0;
  Index zero = 0;
  Inertia& operator+=(const Inertia& o) {
    pos += o.pos;
    neg += o.neg;
    zero += o.zero;
    return *this;
  }
};

// In-place Bunch-Kaufman LDL^H of the leading `nfs` columns of a Hermitian
// matrix stored in the lower triangle of `a`. Pivots are drawn from the first
// `nfs` indices only; on return the trailing block holds the Schur complement.
// `swaps[k]` is the row exchanged with k at step k; `blocks[k]` is 1 for a
// 1x1 pivot, 2 for the first column of a 2x2 pivot and 0 for its second.
struct BkPivots {
  std::vector<Index> swaps;
  std::vector<int> blocks;
  bool breakdown = false;  // an exactly singular pivot was met
};

BkPivots bk_factor(CMat& a, Index nfs, int block_size = 64);

// Inertia of the block diagonal D produced by bk_factor.
Inertia pivot_inertia(const CMat& a, const BkPivots& piv);

// Applies (L D L^H)^{-1} for a full factorization (nfs == rows).
void bk_solve(const CMat& a, const BkPivots& piv, CVec& x);

class DenseLdlt {
 public:
  explicit DenseLdlt(CMat a, int block_size = 64);
  Inertia inertia() const { return pivot_inertia(a_, piv_); }
  bool breakdown() const { return piv_.breakdown; }
  void solve_in_place(CVec& x) const { bk_solve(a_, piv_, x); }
  Index rows() const { return a_.rows(); }

 private:
  CMat a_;
  BkPivots piv_;
};

}  // namespace sloc
