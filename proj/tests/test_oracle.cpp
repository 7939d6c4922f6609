#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sloc/localizer.hpp"
#include "sloc/oracle.hpp"

using namespace sloc;
using std::numbers::pi;

namespace {

// Degree of k -> d(k)/|d(k)| for QWZ, d = (sin kx, sin ky, m + cos kx + cos ky),
// from signed solid angles of the image of a triangulated torus.
double qwz_degree(double m, int nk) {
  auto d = [&](int i, int j) {
    const double kx = 2 * pi * i / nk, ky = 2 * pi * j / nk;
    Vec3 v{std::sin(kx), std::sin(ky), m + std::cos(kx) + std::cos(ky)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return Vec3{v[0] / n, v[1] / n, v[2] / n};
  };
  auto dot = [](const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  auto solid = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 bc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]};
    return 2.0 * std::atan2(dot(a, bc), 1.0 + dot(a, b) + dot(b, c) + dot(c, a));
  };
  double total = 0.0;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      total += solid(d(i, j), d(i + 1, j), d(i + 1, j + 1));
      total += solid(d(i, j), d(i + 1, j + 1), d(i, j + 1));
    }
  return total / (4 * pi);
}

}  // namespace

TEST_CASE("Chern numbers of QWZ") {
  // Frozen at the reference point: chern(m = 1) = +1 = localizer half-signature.
  CHECK(chern_number(TightBindingModel::qwz(1.0), 40).chern == 1);
  CHECK(chern_number(TightBindingModel::qwz(-1.0), 40).chern == -1);
  CHECK(chern_number(TightBindingModel::qwz(3.0), 40).chern == 0);
  CHECK(chern_number(TightBindingModel::qwz(-3.0), 40).chern == 0);
}

TEST_CASE("Chern number equals the degree of the Bloch sphere map up to a fixed sign") {
  const long s = std::lround(qwz_degree(1.0, 100)) * chern_number(TightBindingModel::qwz(1.0), 40).chern;
  CHECK(std::abs(s) == 1);
  for (double m : {-2.5, -1.0, -0.4, 0.4, 1.7, 2.6}) {
    const double deg = qwz_degree(m, 100);
    CHECK(std::abs(deg - std::lround(deg)) < 0.05);
    CHECK(chern_number(TightBindingModel::qwz(m), 40).chern == s * std::lround(deg));
  }
}

TEST_CASE("Chern number is stable under grid refinement") {
  for (double m : {1.0, -1.0, 3.0, 0.5}) {
    const long c20 = chern_number(TightBindingModel::qwz(m), 20).chern;
    CHECK(chern_number(TightBindingModel::qwz(m), 40).chern == c20);
    const auto r80 = chern_number(TightBindingModel::qwz(m), 80);
    CHECK(r80.chern == c20);
    CHECK(r80.residual < 1e-8);
  }
}

TEST_CASE("Chern number is gauge invariant") {
  const auto q = TightBindingModel::qwz(1.0);
  const int nk = 24;
  std::vector<CMat> frames;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      Eigen::SelfAdjointEigenSolver<CMat> es(q.bloch(2 * pi * i / nk, 2 * pi * j / nk));
      frames.push_back(es.eigenvectors().leftCols(1));
    }
  const long base = chern_from_frames(frames, nk).chern;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 2 * pi);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = frames;
    for (auto& m : f) m *= std::polar(1.0, u(rng));
    CHECK(chern_from_frames(f, nk).chern == base);
  }
  CHECK(base == chern_number(q, nk).chern);
  CHECK_THROWS_AS(chern_from_frames(frames, nk + 1), DomainError);
}

TEST_CASE("Fredholm index of trivial projections") {
  FredholmOptions o;
  o.box_radius = 8.0;
  for (double c : {1.0, -1.0}) {  // P = 0 and P = 1
    const auto f = fredholm_index_estimate(TightBindingModel::constant(2, c), o);
    CHECK(f.index == 0);
    CHECK(f.reliable);
  }
  const auto f3 = fredholm_index_estimate(TightBindingModel::qwz(3.0), o);
  CHECK(f3.index == 0);
  CHECK(f3.reliable);
}

TEST_CASE("Fredholm index of the Chern phase") {
  // Regression value for T = PFP + (1 - P) with P = chi(H < 0): the estimate is
  // the negative of the half-signature for QWZ m = +-1 (sign tracked in the notes).
  FredholmOptions o;
  o.box_radius = 10.0;
  const auto f1 = fredholm_index_estimate(TightBindingModel::qwz(1.0), o);
  CHECK(f1.reliable);
  CHECK(f1.index == -1);
  const auto fm1 = fredholm_index_estimate(TightBindingModel::qwz(-1.0), o);
  CHECK(fm1.index == 1);
}

TEST_CASE("index sphere") {
  const double rho = 6.0;
  const auto flat = flatten(TightBindingModel::qwz(1.0));
  const auto h = flat.on(make_region(Shape::Disc, rho));
  const TaperPair t;
  const SphereMapFunctions g(SphereMapChoice::Smooth);
  const auto y = build_index_sphere(h, t, g, rho);
  for (const auto* op : {&y.X1, &y.X2, &y.X3}) CHECK(op->hermiticity_defect() < 1e-12);
  const auto self = compare_spheres(y, y);
  CHECK(self.max_dev == 0.0);
  CHECK(self.half_signature_a == self.half_signature_b);
  // Y'3 = G2(f^2) does not depend on the projection.
  const auto yp = build_index_sphere(h, t, g, rho, {true});
  CHECK((yp.X3.to_dense() - y.X3.to_dense()).norm() == 0.0);
}
