#pragma once

#include "sloc/operator.hpp"

namespace sloc {

// Even taper F_1 with F_1 = 1 on [-1/2, 1/2] and 0 outside [-1, 1], built from
// the normalized integral of exp(-a / (u (1 - u))); its dual f_1 satisfies
// F_1^4 + f_1^4 = 1. Rescaled versions are F_rho(x) = F_1(x / rho).
class TaperPair {
 public:
  explicit TaperPair(double bump_exponent = 1.0);

  double F(double x, double rho = 1.0) const;
  double f(double x, double rho = 1.0) const;
  // Derivative of F_1.
  double dF(double x) const;
  double bump_exponent() const { return a_; }

  // (1/2pi) int |hat{F_1'}(p)| dp with hat{g}(p) = int e^{-ipx} g(x) dx.
  // This is the constant N in ||[G(D), A]|| <= N ||[D, A]|| for G' = F_1'.
  double fourier_l1() const { return fourier_l1_; }
  // Same integral without the 1/2pi.
  double fourier_l1_raw() const;
  // Bound on the neglected high-frequency tail of fourier_l1.
  double fourier_tail_bound() const { return tail_bound_; }

 private:
  double a_;
  double norm_;  // int_0^1 bump
  std::vector<double> cdf_;  // transition values on a uniform grid of [0,1]
  double fourier_l1_ = 0.0;
  double tail_bound_ = 0.0;
  double bump(double u) const;
  double step(double u) const;  // normalized integral of the bump on [0, u]
};

TaperPair make_taper(double bump_exponent = 1.0);

struct TaperCheck {
  double lhs = 0.0;    // ||[G_rho(D), A]||
  double rhs = 0.0;    // N(G_rho) ||[D, A]||
  double ratio = 0.0;  // lhs / rhs
};

// Checks ||[F_rho(D), A]|| <= N(F_rho) ||[D, A]|| with N(F_rho) = N(F_1)/rho
// for a Hermitian A on the doubled space of the Dirac operator's region.
TaperCheck taper_commutator_check(const TaperPair& t, double rho, const CMat& a, int internal_dim,
                                  const RegionPtr& region);

}  // namespace sloc
