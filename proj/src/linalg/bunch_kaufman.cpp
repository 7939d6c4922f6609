#include "sloc/linalg/bunch_kaufman.hpp"

#include <cmath>

namespace sloc {

namespace {

// Symmetric exchange of indices p < q in a lower-stored Hermitian matrix.
// Columns left of p (including finished L columns) get their rows swapped.
void sym_swap(CMat& a, Index p, Index q) {
  const Index n = a.rows();
  std::swap(a(p, p), a(q, q));
  for (Index i = p + 1; i < q; ++i) {
    const cplx t = a(i, p);
    a(i, p) = std::conj(a(q, i));
    a(q, i) = std::conj(t);
  }
  a(q, p) = std::conj(a(q, p));
  for (Index i = q + 1; i < n; ++i) std::swap(a(i, p), a(i, q));
  for (Index j = 0; j < p; ++j) std::swap(a(p, j), a(q, j));
}

}  // namespace

BkPivots bk_factor(CMat& a, Index nfs, int nb) {
  const Index n = a.rows();
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  BkPivots piv;
  piv.swaps.assign(static_cast<size_t>(nfs), 0);
  piv.blocks.assign(static_cast<size_t>(nfs), 1);
  if (nfs == 0) return piv;
  nb = static_cast<int>(std::max<Index>(1, std::min<Index>(nb, nfs)));
  CMat W(n, nb + 1);
  CVec ck(n), cr(n);

  Index k = 0;
  while (k < nfs) {
    const Index k0 = k;
    Index kk = 0;
    while (k < nfs && kk < nb) {
      const Index len = n - k;
      auto wk = ck.head(len);
      wk = a.col(k).tail(len);
      if (kk > 0) wk.noalias() -= a.block(k, k0, len, kk) * W.block(k, 0, 1, kk).adjoint();
      const double absakk = std::abs(wk(0).real());
      double colmax = 0.0;
      Index imax = 0;
      for (Index i = 1; i < nfs - k; ++i) {
        const double v = std::abs(wk(i));
        if (v > colmax) {
          colmax = v;
          imax = i;
        }
      }
      int kstep = 1;
      Index kp = k;
      bool use_r = false;
      if (absakk < alpha * colmax) {
        const Index r = k + imax;
        auto wr = cr.head(len);
        wr.head(r - k) = a.row(r).segment(k, r - k).adjoint();
        wr.tail(n - r) = a.col(r).tail(n - r);
        if (kk > 0) wr.noalias() -= a.block(k, k0, len, kk) * W.block(r, 0, 1, kk).adjoint();
        double rowmax = 0.0;
        for (Index i = 0; i < nfs - k; ++i)
          if (i != r - k) rowmax = std::max(rowmax, std::abs(wr(i)));
        if (absakk >= alpha * colmax * (colmax / rowmax)) {
          kp = k;
        } else if (std::abs(wr(r - k).real()) >= alpha * rowmax) {
          kp = r;
          use_r = true;
        } else {
          kp = r;
          kstep = 2;
        }
      }

      const Index kt = k + kstep - 1;
      if (kp != kt) {
        sym_swap(a, kt, kp);
        if (kk > 0) W.block(kt, 0, 1, kk).swap(W.block(kp, 0, 1, kk));
        std::swap(ck(kt - k), ck(kp - k));
        std::swap(cr(kt - k), cr(kp - k));
      }

      if (kstep == 1) {
        auto pc = use_r ? cr.head(len) : ck.head(len);
        const double d = pc(0).real();
        if (d == 0.0) {
          piv.breakdown = true;
          a.col(k).tail(len).setZero();
          W.col(kk).segment(k, len).setZero();
        } else {
          W.col(kk).segment(k, len) = pc;
          W(k, kk) = d;
          a(k, k) = d;
          a.col(k).tail(len - 1) = pc.tail(len - 1) / d;
        }
        piv.swaps[static_cast<size_t>(k)] = kp;
        piv.blocks[static_cast<size_t>(k)] = 1;
      } else {
        auto c1 = ck.head(len);
        auto c2 = cr.head(len);
        const double d11 = c1(0).real();
        const cplx d21 = c1(1);
        const double d22 = c2(1).real();
        const double det = d11 * d22 - std::norm(d21);
        if (det == 0.0) piv.breakdown = true;
        W.col(kk).segment(k, len) = c1;
        W.col(kk + 1).segment(k, len) = c2;
        a(k, k) = d11;
        a(k + 1, k) = d21;
        a(k + 1, k + 1) = d22;
        const Index m = len - 2;
        if (m > 0) {
          if (det == 0.0) {
            a.col(k).tail(m).setZero();
            a.col(k + 1).tail(m).setZero();
          } else {
            const CVec t1 = c1.tail(m);
            const CVec t2 = c2.tail(m);
            a.col(k).tail(m) = (t1 * d22 - t2 * d21) / det;
            a.col(k + 1).tail(m) = (t2 * d11 - t1 * std::conj(d21)) / det;
          }
        }
        piv.swaps[static_cast<size_t>(k)] = k;
        piv.swaps[static_cast<size_t>(k + 1)] = kp;
        piv.blocks[static_cast<size_t>(k)] = 2;
        piv.blocks[static_cast<size_t>(k + 1)] = 0;
      }
      k += kstep;
      kk += kstep;
    }

    // Rank-kk update of the trailing lower triangle, one column slab at a time.
    if (kk > 0 && k < n) {
      const Index slab = 128;
      for (Index c = k; c < n; c += slab) {
        const Index w = std::min(slab, n - c);
        a.block(c, c, n - c, w).noalias() -= a.block(c, k0, n - c, kk) * W.block(c, 0, w, kk).adjoint();
      }
    }
  }
  return piv;
}

Inertia pivot_inertia(const CMat& a, const BkPivots& piv) {
  Inertia in;
  const Index nfs = static_cast<Index>(piv.blocks.size());
  for (Index k = 0; k < nfs; ++k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    if (b == 1) {
      const double d = a(k, k).real();
      (d > 0 ? in.pos : d < 0 ? in.neg : in.zero) += 1;
    } else if (b == 2) {
      const double d11 = a(k, k).real();
      const double d22 = a(k + 1, k + 1).real();
      const double det = d11 * d22 - std::norm(a(k + 1, k));
      if (det < 0) {
        in.pos += 1;
        in.neg += 1;
      } else if (det > 0) {
        (d11 + d22 > 0 ? in.pos : in.neg) += 2;
      } else {
        in.zero += 1;
        (d11 + d22 > 0 ? in.pos : d11 + d22 < 0 ? in.neg : in.zero) += 1;
      }
    }
  }
  return in;
}

void bk_solve(const CMat& a, const BkPivots& piv, CVec& x) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    const Index p = piv.swaps[static_cast<size_t>(k)];
    if (p != k) std::swap(x(k), x(p));
  }
  // Forward: unit lower L, skipping the D entry stored below a 2x2 diagonal.
  for (Index k = 0; k < n; ++k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    if (b == 1) {
      if (k + 1 < n) x.tail(n - k - 1).noalias() -= a.col(k).tail(n - k - 1) * x(k);
    } else if (b == 2) {
      if (k + 2 < n) {
        x.tail(n - k - 2).noalias() -= a.col(k).tail(n - k - 2) * x(k);
        x.tail(n - k - 2).noalias() -= a.col(k + 1).tail(n - k - 2) * x(k + 1);
      }
      ++k;
    }
  }
  for (Index k = 0; k < n; ++k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    if (b == 1) {
      const double d = a(k, k).real();
      x(k) = d == 0.0 ? cplx(0.0) : x(k) / d;
    } else if (b == 2) {
      const double d11 = a(k, k).real();
      const double d22 = a(k + 1, k + 1).real();
      const cplx d21 = a(k + 1, k);
      const double det = d11 * d22 - std::norm(d21);
      const cplx u = x(k), v = x(k + 1);
      x(k) = (d22 * u - std::conj(d21) * v) / det;
      x(k + 1) = (d11 * v - d21 * u) / det;
      ++k;
    }
  }
  for (Index k = n - 1; k >= 0; --k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    if (b == 1) {
      if (k + 1 < n) x(k) -= a.col(k).tail(n - k - 1).dot(x.tail(n - k - 1));
    } else if (b == 0) {
      // second column of a 2x2 block at (k-1, k)
      if (k + 1 < n) {
        x(k) -= a.col(k).tail(n - k - 1).dot(x.tail(n - k - 1));
        x(k - 1) -= a.col(k - 1).tail(n - k - 1).dot(x.tail(n - k - 1));
      }
      --k;
    }
  }
  for (Index k = n - 1; k >= 0; --k) {
    const Index p = piv.swaps[static_cast<size_t>(k)];
    if (p != k) std::swap(x(k), x(p));
  }
}

DenseLdlt::DenseLdlt(CMat a, int block_size) : a_(std::move(a)) {
  piv_ = bk_factor(a_, a_.rows(), block_size);
}

}  // namespace sloc
