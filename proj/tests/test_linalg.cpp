#include <doctest.h>

#include <random>

#include "sloc/dirac.hpp"
#include "sloc/linalg/inertia.hpp"
#include "sloc/localizer.hpp"
#include "sloc/model.hpp"

using namespace sloc;

namespace {

CMat random_hermitian(Index n, std::mt19937_64& rng, bool zero_diagonal = false) {
  std::normal_distribution<double> g;
  CMat a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  CMat h = (a + a.adjoint()) / 2.0;
  if (zero_diagonal) h.diagonal().setZero();
  return h;
}

Inertia eig_inertia(const CMat& a, double shift = 0.0) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  Inertia r;
  for (double l : es.eigenvalues()) (l > shift ? r.pos : l < shift ? r.neg : r.zero) += 1;
  return r;
}

HermitianOperator lattice_operator(double rho, double kappa) {
  const auto region = make_region(Shape::Disc, rho);
  const auto h = build_hamiltonian(TightBindingModel::qwz(1.0), region, Storage::Sparse);
  return assemble_localizer(h, build_dirac(region), kappa);
}

}  // namespace

TEST_CASE("Bunch-Kaufman inertia matches eigenvalues") {
  std::mt19937_64 rng(11);
  for (Index n : {1, 2, 3, 7, 64, 65, 130, 257}) {
    for (bool zd : {false, true}) {
      if (zd && n == 1) continue;  // the zero matrix
      const CMat a = random_hermitian(n, rng, zd);
      DenseLdlt f(a);
      REQUIRE_FALSE(f.breakdown());
      const Inertia got = f.inertia(), want = eig_inertia(a);
      CHECK(got.pos == want.pos);
      CHECK(got.neg == want.neg);
      CHECK(got.zero == 0);
    }
  }
}

TEST_CASE("Bunch-Kaufman solve") {
  std::mt19937_64 rng(12);
  const CMat a = random_hermitian(150, rng, true);
  DenseLdlt f(a);
  CVec b = CVec::Random(150);
  CVec x = b;
  f.solve_in_place(x);
  CHECK((a * x - b).norm() / b.norm() < 1e-10);
}

TEST_CASE("partial factorization leaves the Schur complement") {
  std::mt19937_64 rng(13);
  const Index n = 40, k = 25;
  const CMat a = random_hermitian(n, rng);
  CMat w = a;
  const BkPivots piv = bk_factor(w, k, 8);
  // The pivots come from the leading block only, so the trailing block is
  // the Schur complement of a[0:k, 0:k] and inertia is additive.
  const CMat s = a.bottomRightCorner(n - k, n - k) -
                 a.bottomLeftCorner(n - k, k) * a.topLeftCorner(k, k).inverse() * a.topRightCorner(k, n - k);
  CMat tail = w.bottomRightCorner(n - k, n - k);
  tail = tail.selfadjointView<Eigen::Lower>();
  CHECK((tail - s).norm() < 1e-9 * s.norm());
  Inertia total = pivot_inertia(w, piv);
  total += eig_inertia(s);
  const Inertia want = eig_inertia(a);
  CHECK(total.pos == want.pos);
  CHECK(total.neg == want.neg);
}

TEST_CASE("singular matrices are flagged or counted as zero") {
  CMat z = CMat::Zero(4, 4);
  DenseLdlt f(z);
  CHECK(f.breakdown());
}

TEST_CASE("multifrontal inertia matches the dense path") {
  for (double kappa : {0.05, 0.3}) {
    const auto l = lattice_operator(9.0, kappa);
    const CMat dense = l.to_dense();
    const auto sym = analyze_lattice(l.sparse(), l.basis());
    for (double shift : {0.0, 0.37, -0.5}) {
      SparseLdlt f(sym, l.sparse(), shift);
      REQUIRE_FALSE(f.breakdown());
      const Inertia want = eig_inertia(dense, shift);
      CHECK(f.inertia().pos == want.pos);
      CHECK(f.inertia().neg == want.neg);
    }
  }
}

TEST_CASE("multifrontal solve") {
  const auto l = lattice_operator(7.0, 0.2);
  const auto sym = analyze_lattice(l.sparse(), l.basis());
  SparseLdlt f(sym, l.sparse(), 0.1, true);
  CVec b = CVec::Random(l.dim());
  CVec x = b;
  f.solve_in_place(x);
  const CVec r = l.sparse() * x - 0.1 * x - b;
  CHECK(r.norm() / b.norm() < 1e-10);
}

TEST_CASE("shifted inertia backends agree") {
  const auto l = lattice_operator(8.0, 0.15);
  const RVec ev = hermitian_eigenvalues(l);
  for (auto backend : {InertiaBackend::Dense, InertiaBackend::Sparse, InertiaBackend::Eigen}) {
    ShiftedInertia si(l, backend);
    const InertiaResult r = si.counts(0.05);
    Index p = 0, n = 0;
    for (double v : ev) {
      p += v > 0.05;
      n += v < -0.05;
    }
    CHECK(r.n_plus == p);
    CHECK(r.n_minus == n);
    Index inside = 0;
    for (double v : ev) inside += v > -0.8 && v < 0.6;
    CHECK(si.count_open(-0.8, 0.6) == inside);
    CHECK(si.min_abs_eig() == doctest::Approx(ev.cwiseAbs().minCoeff()).epsilon(1e-8));
  }
}

TEST_CASE("Lanczos extremal eigenvalues and norm") {
  std::mt19937_64 rng(14);
  const CMat a = random_hermitian(200, rng);
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  const auto r = lanczos_extremal([&](const CVec& x, CVec& y) { y = a * x; }, 200);
  CHECK(r.converged);
  CHECK(r.min_eig == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-9));
  CHECK(r.max_eig == doctest::Approx(es.eigenvalues()(199)).epsilon(1e-9));
  const auto l = lattice_operator(10.0, 0.2);
  CHECK(operator_norm(l) == doctest::Approx(hermitian_eigenvalues(l).cwiseAbs().maxCoeff()).epsilon(1e-8));
}

TEST_CASE("backend names") {
  CHECK(parse_backend("sparse") == InertiaBackend::Sparse);
  CHECK(to_string(InertiaBackend::Dense) == "dense");
  CHECK_THROWS_AS(parse_backend("lapack"), ConfigError);
}
