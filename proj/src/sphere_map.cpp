#include "sloc/sphere_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sloc/types.hpp"

namespace sloc {

namespace {

constexpr double kBinom8[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("homotopy parameter must lie in [0,1]");
}

}  // namespace

SphereMapChoice parse_sphere_map(const std::string& s) {
  if (s == "special") return SphereMapChoice::Special;
  if (s == "smooth") return SphereMapChoice::Smooth;
  throw ConfigError("unknown sphere map choice '" + s + "'");
}

double SphereMapFunctions::I(double y) const {
  y = std::clamp(y, 0.0, 1.0);
  if (choice_ == SphereMapChoice::Special) return y;
  double s = 0.0;
  for (int j = 4; j <= 8; ++j) s += kBinom8[j] * std::pow(y, j) * std::pow(1.0 - y, 8 - j);
  return s;
}

double SphereMapFunctions::I_over_y(double y) const {
  y = std::clamp(y, 0.0, 1.0);
  if (choice_ == SphereMapChoice::Special) return 1.0;
  double s = 0.0;
  for (int j = 4; j <= 8; ++j) s += kBinom8[j] * std::pow(y, j - 1) * std::pow(1.0 - y, 8 - j);
  return s;
}

double SphereMapFunctions::one_minus_I_over(double y) const {
  y = std::clamp(y, 0.0, 1.0);
  if (choice_ == SphereMapChoice::Special) return 1.0;
  double s = 0.0;
  for (int j = 0; j <= 3; ++j) s += kBinom8[j] * std::pow(y, j) * std::pow(1.0 - y, 7 - j);
  return s;
}

double SphereMapFunctions::G2p(double x, double lambda) const {
  check_lambda(lambda);
  const double y = 1.0 - (1.0 - x) / (2.0 - lambda);
  return 1.0 - 2.0 * I(std::abs(y));
}

double SphereMapFunctions::G1p(double x, double lambda) const {
  check_lambda(lambda);
  if (x <= lambda - 1.0) return 0.0;
  x = std::min(x, 1.0);
  // G1'^4 = (1 - G2'^2) / (1 - x^2) = 4 I (1 - I) / ((1 - x)(1 + x)), y in (0, 1].
  const double s = 2.0 - lambda;
  const double y = (x - (lambda - 1.0)) / s;
  const double one_minus_I_over_1mx = one_minus_I_over(y) / s;  // (1-I)/(1-x), as 1-y = (1-x)/s
  const double I_over_1px = 1.0 + x > 0.0 ? I_over_y(y) * (y / (1.0 + x)) : I_over_y(y) / s;
  const double q = 4.0 * I_over_1px * one_minus_I_over_1mx;
  return std::pow(std::max(q, 0.0), 0.25);
}

double SphereMapFunctions::lower_arc(double x, double lambda) const {
  check_lambda(lambda);
  if (!(x < lambda - 1.0)) return 0.0;
  const double g = G2p(x, lambda);
  return std::sqrt(std::max(0.0, 1.0 - g * g));
}

double SphereMapFunctions::G1(double x) const {
  return G1p(std::sqrt(std::max(0.0, 1.0 - x * x)));
}

double SphereMapFunctions::G2(double x) const {
  return G2p(std::sqrt(std::max(0.0, 1.0 - x * x)));
}

Vec3 sphere_map_point(const SphereMapFunctions& g, const Vec3& x, double lambda) {
  const double a = g.G1p(x[2], lambda);
  return {a * a * x[0] + g.lower_arc(x[2], lambda), -a * a * x[1], g.G2p(x[2], lambda)};
}

DegreeResult mapping_degree(const SphereMapFunctions& g, int n_theta, int n_phi, double lambda) {
  return mapping_degree([&](const Vec3& x) { return sphere_map_point(g, x, lambda); }, n_theta, n_phi);
}

DegreeResult mapping_degree(const std::function<Vec3(const Vec3&)>& map, int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 3) throw DomainError("degree grid too coarse");
  auto pt = [&](int i, int j) {
    const double th = std::numbers::pi * i / n_theta;
    const double ph = 2.0 * std::numbers::pi * j / n_phi;
    return map({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
  };
  std::vector<Vec3> img(static_cast<size_t>(n_theta + 1) * n_phi);
  for (int i = 0; i <= n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) img[static_cast<size_t>(i) * n_phi + j] = pt(i, j);
  auto at = [&](int i, int j) -> const Vec3& { return img[static_cast<size_t>(i) * n_phi + (j % n_phi)]; };
  auto dot = [](const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  auto solid = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 bc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]};
    return 2.0 * std::atan2(dot(a, bc), 1.0 + dot(a, b) + dot(b, c) + dot(c, a));
  };
  double total = 0.0;
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      total += solid(at(i, j), at(i + 1, j), at(i + 1, j + 1));
      total += solid(at(i, j), at(i + 1, j + 1), at(i, j + 1));
    }
  DegreeResult r;
  r.degree = total / (4.0 * std::numbers::pi);
  r.rounded = std::lround(r.degree);
  r.n_theta = n_theta;
  r.n_phi = n_phi;
  return r;
}

}  // namespace sloc
