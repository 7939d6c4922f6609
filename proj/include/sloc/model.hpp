#pragma once

#include <compare>
#include <map>
#include <string>

#include "sloc/operator.hpp"
#include "sloc/types.hpp"

namespace sloc {

struct Displacement {
  int dx = 0;
  int dy = 0;
  auto operator<=>(const Displacement&) const = default;
  Displacement operator-() const { return {-dx, -dy}; }
  int max_norm() const;
};

// Translation-invariant hopping Hamiltonian on l2(Z^2, C^N):
// (H psi)_m = sum_d t_d psi_{m-d}, with t_{-d} = t_d^*.
class TightBindingModel {
 public:
  // Missing adjoint partners are filled in; inconsistent ones throw ModelError.
  TightBindingModel(int internal_dim, std::map<Displacement, CMat> hoppings);

  static TightBindingModel qwz(double m);
  // Onsite-only model H = c * 1.
  static TightBindingModel constant(int internal_dim, double c);

  int internal_dim() const { return n_; }
  int range() const { return range_; }
  const std::map<Displacement, CMat>& hoppings() const { return hop_; }

  // H(k) = sum_d t_d exp(-i k.d)
  CMat bloch(double kx, double ky) const;
  // Symbol of the commutator [X_j, H]: sum_d d_j t_d exp(-i k.d)
  CMat position_commutator_symbol(int j, double kx, double ky) const;

  TightBindingModel scaled(double s) const;

 private:
  int n_;
  int range_ = 0;
  std::map<Displacement, CMat> hop_;
};

enum class Storage { Auto, Dense, Sparse };

HermitianOperator build_hamiltonian(const TightBindingModel& model, const RegionPtr& region,
                                    Storage storage = Storage::Auto);

}  // namespace sloc
