#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sloc/dirac.hpp"
#include "sloc/flatten.hpp"
#include "sloc/fuzzy.hpp"
#include "sloc/localizer.hpp"

using namespace sloc;
using std::numbers::pi;

namespace {

// Independent taper oracle: composite Simpson on the bump exp(-1/(u(1-u))).
double bump(double u) { return u <= 0.0 || u >= 1.0 ? 0.0 : std::exp(-1.0 / (u * (1.0 - u))); }

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double oracle_F(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.5) return 1.0;
  if (ax >= 1.0) return 0.0;
  const double z = simpson(bump, 0.0, 1.0, 4000);
  return 1.0 - simpson(bump, 0.0, 2.0 * ax - 1.0, 4000) / z;
}

const HermitianOperator& flat_qwz(double rho) {
  static std::map<double, HermitianOperator> cache;
  static const auto flat = flatten(TightBindingModel::qwz(1.0));
  auto it = cache.find(rho);
  if (it == cache.end()) it = cache.emplace(rho, flat.on(make_region(Shape::Disc, rho))).first;
  return it->second;
}

}  // namespace

TEST_CASE("taper shape") {
  const TaperPair t;
  for (double x : {-0.5, -0.2, 0.0, 0.3, 0.5}) CHECK(t.F(x) == 1.0);
  for (double x : {-3.0, -1.0, 1.0, 1.7}) CHECK(t.F(x) == 0.0);
  for (double x = -1.2; x <= 1.2; x += 0.0371) {
    CHECK(t.F(x) == doctest::Approx(t.F(-x)));
    CHECK(std::pow(t.F(x), 4) + std::pow(t.f(x), 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.F(x) == doctest::Approx(oracle_F(x)).epsilon(1e-8));
    CHECK(t.F(7.0 * x, 7.0) == doctest::Approx(t.F(x)));
  }
  for (double x : {0.55, 0.7, 0.8, 0.95}) {
    const double h = 1e-5;
    CHECK(t.dF(x) == doctest::Approx((t.F(x + h) - t.F(x - h)) / (2 * h)).epsilon(1e-5));
    CHECK(t.dF(x) <= 0.0);
  }
}

TEST_CASE("taper Fourier L1 norm") {
  // |hat F'(p)| = (2/Z) |int_0^1 sin(p (1 + u) / 2) b(u) du|, integrated over p in [0, 400].
  const TaperPair t;
  const double z = simpson(bump, 0.0, 1.0, 2000);
  auto hat = [&](double p) {
    return 2.0 / z * std::abs(simpson([&](double u) { return std::sin(p * (1.0 + u) / 2.0) * bump(u); }, 0.0, 1.0, 400));
  };
  const double l1 = 2.0 * simpson(hat, 0.0, 400.0, 8000) / (2.0 * pi);
  CHECK(t.fourier_l1() == doctest::Approx(l1).epsilon(2e-3));
  CHECK(t.fourier_l1() <= 8.0);
  CHECK(t.fourier_l1_raw() == doctest::Approx(2.0 * pi * t.fourier_l1()));
  CHECK(t.fourier_tail_bound() < 0.5);
}

TEST_CASE("taper commutator inequality") {
  const TaperPair t;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  const auto region = make_region(Shape::Disc, 5.0);
  const Index n = 2 * region->size();
  for (double rho : {2.0, 4.5}) {
    CMat a(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    a = (a + a.adjoint()).eval();
    const auto c = taper_commutator_check(t, rho, a, 1, region);
    CHECK(c.lhs <= c.rhs);
    CHECK(c.ratio == doctest::Approx(c.lhs / c.rhs));
  }
}

TEST_CASE("sphere map functions") {
  for (auto choice : {SphereMapChoice::Special, SphereMapChoice::Smooth}) {
    const SphereMapFunctions g(choice);
    CHECK(g.G2p(0.0) == doctest::Approx(1.0));
    CHECK(g.G2p(1.0) == doctest::Approx(-1.0));
    CHECK(g.G2p(-1.0) == doctest::Approx(-1.0));
    for (double x = -0.99; x < 1.0; x += 0.0173) {
      CHECK(g.G2p(x) == doctest::Approx(g.G2p(-x)));
      if (x <= 0.0) CHECK(g.G1p(x) == 0.0);
      if (x >= 0.0) {
        const double lhs = (1.0 - x * x) * std::pow(g.G1p(x), 4) + g.G2p(x) * g.G2p(x);
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
      }
      const double y = std::sqrt(1.0 - x * x);
      CHECK(g.G1(x > 0 ? x : -x) == doctest::Approx(g.G1p(y)));
    }
    for (double lam : {0.0, 0.3, 0.8, 1.0})
      for (double th = 0.05; th < pi; th += 0.31)
        for (double ph = 0.0; ph < 2 * pi; ph += 0.7) {
          const Vec3 p = sphere_map_point(g, {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}, lam);
          CHECK(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] == doctest::Approx(1.0).epsilon(1e-10));
        }
  }
  const SphereMapFunctions s(SphereMapChoice::Smooth);
  CHECK_THROWS_AS(s.G1p(0.5, 1.5), DomainError);
}

TEST_CASE("special choice preimage") {
  const SphereMapFunctions g(SphereMapChoice::Special);
  const Vec3 p = sphere_map_point(g, {0.0, -std::sqrt(3.0) / 2.0, 0.5});
  CHECK(std::abs(p[0]) < 1e-10);
  CHECK(std::abs(p[1] - 1.0) < 1e-10);
  CHECK(std::abs(p[2]) < 1e-10);
}

TEST_CASE("mapping degrees") {
  const auto id = mapping_degree([](const Vec3& x) { return x; }, 60, 40);
  CHECK(id.degree == doctest::Approx(1.0).epsilon(1e-9));
  const auto anti = mapping_degree([](const Vec3& x) { return Vec3{-x[0], -x[1], -x[2]}; }, 60, 40);
  CHECK(anti.degree == doctest::Approx(-1.0).epsilon(1e-9));
  const auto z2 = mapping_degree(
      [](const Vec3& x) {
        // z -> z^2 on the equatorial angle doubles the degree
        const double r = std::hypot(x[0], x[1]);
        if (r == 0.0) return x;
        const double c = x[0] / r, s = x[1] / r;
        return Vec3{r * (c * c - s * s), r * 2 * c * s, x[2]};
      },
      80, 80);
  CHECK(z2.rounded == 2);
  for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto d = mapping_degree(SphereMapFunctions(SphereMapChoice::Smooth), 200, 100, lam);
    CHECK(d.rounded == 1);
    CHECK(std::abs(d.degree - 1.0) < 0.2);
  }
}

TEST_CASE("tapered fuzzy sphere") {
  const double rho = 8.0;
  const auto& h = flat_qwz(rho);
  const TaperPair t;
  const auto x = build_fuzzy_sphere(h, t, rho);
  for (const auto* op : {&x.X1, &x.X2, &x.X3}) {
    CHECK(op->hermiticity_defect() < 1e-12);
    CHECK(operator_norm(*op) <= 1.0 + 1e-10);
  }
  // X1, X2 are diagonal in position.
  const CMat x1 = x.X1.to_dense();
  CHECK((x1 - CMat(x1.diagonal().asDiagonal())).norm() == 0.0);
  const CMat m = sphere_to_matrix(x).to_dense();
  const Index b = x.dim();
  CHECK((m.topLeftCorner(b, b) - x.X3.to_dense()).norm() == 0.0);
  CHECK((m.bottomLeftCorner(b, b) - (x.X1.to_dense() + cplx(0, 1) * x.X2.to_dense())).norm() < 1e-15);
  const auto w = fuzzy_width_parts(x);
  CHECK(w.c12 < 1e-12);
  CHECK(w.width() < 1.0);
  CHECK(fuzzy_width(build_fuzzy_sphere(flat_qwz(12.0), t, 12.0)) < w.width());
}

TEST_CASE("localizer homotopy starts at the localizer") {
  const double rho = 8.0, kappa = 0.3;
  const auto& h = flat_qwz(rho);
  const TaperPair t;
  const auto x0 = localizer_sphere_homotopy(h, t, kappa, rho, 0.0);
  const auto l = assemble_localizer(h, build_dirac(h.basis().region), kappa);
  CHECK((sphere_to_matrix(x0).to_dense() - l.to_dense()).norm() == 0.0);
  const auto x1 = localizer_sphere_homotopy(h, t, kappa, rho, 1.0);
  const auto xs = build_fuzzy_sphere(h, t, rho);
  CHECK((sphere_to_matrix(x1).to_dense() - sphere_to_matrix(xs).to_dense()).norm() == 0.0);
  CHECK_THROWS_AS(localizer_sphere_homotopy(h, t, kappa, rho, 1.2), DomainError);
}

TEST_CASE("spectral calculus") {
  const auto& h = flat_qwz(5.0);
  const TaperPair t;
  const auto x = build_fuzzy_sphere(h, t, 5.0);
  const SpectralCalculus sc(x.X3);
  CHECK((sc.apply([](double v) { return v; }) - x.X3.to_dense()).norm() < 1e-12);
  const CMat sq = sc.apply([](double v) { return v * v; });
  CHECK((sq - x.X3.to_dense() * x.X3.to_dense()).norm() < 1e-12);
  const CMat s = sc.sandwich([](double v) { return 1.0 + v; }, x.X1);
  const CMat g = CMat::Identity(x.dim(), x.dim()) + x.X3.to_dense();
  CHECK((s - g * x.X1.to_dense() * g).norm() < 1e-11);
}

TEST_CASE("mapped sphere keeps its class along the sphere-map homotopy") {
  const double rho = 8.0;
  const TaperPair t;
  const auto x = build_fuzzy_sphere(flat_qwz(rho), t, rho);
  const auto pts = fuzzy_homotopy(x, SphereMapFunctions(SphereMapChoice::Smooth), 5);
  REQUIRE(pts.size() == 5);
  for (const auto& p : pts) {
    CHECK(p.min_abs_eig > 0.0);
    CHECK(p.half_signature == pts.front().half_signature);
  }
  CHECK(sphere_signature(x).half_signature == pts.front().half_signature);
}
