#pragma once

#include <array>
#include <functional>
#include <string>

namespace sloc {

enum class SphereMapChoice {
  Special,  // G2'(x) = 1 - 2|x|
  Smooth    // G2'(x) = 1 - 2 I_|x|(4,5): flat to order 4 at 0 and order 5 at 1
};

SphereMapChoice parse_sphere_map(const std::string& s);

// Pair (G1', G2') on [-1,1] with G1'(-x) = 0, G2' even, G2'(0) = 1 = -G2'(1)
// and (1 - x^2) G1'(x)^4 + G2'(x)^2 = 1 for x >= 0, plus the lambda-deformation used to
// connect the induced sphere map to the identity. lambda = 1 is the original.
class SphereMapFunctions {
 public:
  explicit SphereMapFunctions(SphereMapChoice choice = SphereMapChoice::Smooth) : choice_(choice) {}
  SphereMapChoice choice() const { return choice_; }

  double G1p(double x, double lambda = 1.0) const;
  double G2p(double x, double lambda = 1.0) const;
  // chi(x < lambda - 1) (1 - G2'_lambda(x)^2)^{1/2}
  double lower_arc(double x, double lambda = 1.0) const;

  // Dual pair on [0,1]: G1(x) = G1'(sqrt(1 - x^2)), G2(x) = G2'(sqrt(1 - x^2)).
  double G1(double x) const;
  double G2(double x) const;

 private:
  SphereMapChoice choice_;
  // Profile I with G2'(y) = 1 - 2 I(|y|) on [0,1].
  double I(double y) const;
  double I_over_y(double y) const;
  double one_minus_I_over(double y) const;  // (1 - I(y)) / (1 - y)
};

using Vec3 = std::array<double, 3>;

Vec3 sphere_map_point(const SphereMapFunctions& g, const Vec3& x, double lambda = 1.0);

struct DegreeResult {
  double degree = 0.0;  // (1/4pi) * total signed solid angle of the image
  long rounded = 0;
  int n_theta = 0, n_phi = 0;
};

// Degree from a triangulated (theta, phi) grid with n_theta x n_phi cells.
DegreeResult mapping_degree(const SphereMapFunctions& g, int n_theta, int n_phi, double lambda = 1.0);
DegreeResult mapping_degree(const std::function<Vec3(const Vec3&)>& map, int n_theta, int n_phi);

}  // namespace sloc
