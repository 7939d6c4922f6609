#include "sloc/taper.hpp"

#include <cmath>
#include <numbers>

#include "sloc/dirac.hpp"
#include "sloc/linalg/inertia.hpp"

namespace sloc {

namespace {

constexpr int kCdfGrid = 1 << 14;

// Composite Gauss-Legendre on [lo, hi] with `panels` panels.
template <class F>
double gauss(F&& f, double lo, double hi, int panels) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  const double h = (hi - lo) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = lo + (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) s += w[k] * f(c + 0.5 * h * x[k]);
  }
  return 0.5 * h * s;
}

}  // namespace

TaperPair::TaperPair(double a) : a_(a) {
  if (!(a > 0.0)) throw DomainError("bump exponent must be positive");
  norm_ = gauss([&](double u) { return bump(u); }, 0.0, 1.0, 400);
  cdf_.resize(kCdfGrid + 1);
  cdf_[0] = 0.0;
  const double h = 1.0 / kCdfGrid;
  for (int i = 0; i < kCdfGrid; ++i)
    cdf_[i + 1] = cdf_[i] + gauss([&](double u) { return bump(u); }, i * h, (i + 1) * h, 1) / norm_;
  const double drift = cdf_[kCdfGrid];
  for (double& c : cdf_) c /= drift;

  // F_1' is odd and supported on 1/2 < |x| < 1, so
  // hat{F_1'}(p) = -2i int_{1/2}^1 sin(px) F_1'(x) dx with F_1'(x) = -2 b(2x-1)/Z.
  // Hence |hat{F_1'}(p)| = (2/Z) |int_0^1 sin(p(1+u)/2) b(u) du|.
  auto fhat = [&](double p) {
    return std::abs(gauss([&](double u) { return std::sin(0.5 * p * (1.0 + u)) * bump(u); }, 0.0, 1.0, 64)) *
           2.0 / norm_;
  };
  // |hat{F_1'}(p)| <= ||F_1'''||_1 / p^2, giving a tail bound ||F_1'''||_1 / P.
  const double cut = 400.0;
  const double raw = 2.0 * gauss(fhat, 0.0, cut, 16000);
  const double d3 = gauss(
      [&](double x) {
        const double e = 1e-4;
        return std::abs(dF(x + e) - 2.0 * dF(x) + dF(x - e)) / (e * e);
      },
      0.5, 1.0, 4000);
  tail_bound_ = 2.0 * d3 / cut / (2.0 * std::numbers::pi);
  fourier_l1_ = raw / (2.0 * std::numbers::pi);
}

double TaperPair::bump(double u) const {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return std::exp(-a_ / (u * (1.0 - u)));
}

double TaperPair::step(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double s = u * kCdfGrid;
  const int i = std::min(static_cast<int>(s), kCdfGrid - 1);
  const double t = s - i;
  // Cubic Hermite interpolation with the exact derivative.
  const double h = 1.0 / kCdfGrid;
  const double y0 = cdf_[i], y1 = cdf_[i + 1];
  const double m0 = bump(i * h) / norm_ * h, m1 = bump((i + 1) * h) / norm_ * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
}

double TaperPair::F(double x, double rho) const {
  const double y = std::abs(x) / rho;
  if (y <= 0.5) return 1.0;
  if (y >= 1.0) return 0.0;
  return 1.0 - step(2.0 * y - 1.0);
}

double TaperPair::f(double x, double rho) const {
  const double F4 = std::pow(F(x, rho), 4);
  return std::pow(std::max(0.0, 1.0 - F4), 0.25);
}

double TaperPair::dF(double x) const {
  const double y = std::abs(x);
  if (y <= 0.5 || y >= 1.0) return 0.0;
  const double d = -2.0 * bump(2.0 * y - 1.0) / norm_;
  return x < 0 ? -d : d;
}

double TaperPair::fourier_l1_raw() const { return fourier_l1_ * 2.0 * std::numbers::pi; }

TaperPair make_taper(double bump_exponent) { return TaperPair(bump_exponent); }

TaperCheck taper_commutator_check(const TaperPair& t, double rho, const CMat& a, int internal_dim,
                                  const RegionPtr& region) {
  const auto dd = build_dirac(region);
  const auto dop = dirac_operator(dd, internal_dim);
  const Index n = dop.dim();
  if (a.rows() != n || a.cols() != n) throw BasisMismatchError("operator does not match the Dirac basis");
  // F_rho(D) = F_rho(|D|) since F is even; |D| = R (+) R.
  const RVec r = per_orbital(dd.r, internal_dim);
  const Index b = r.size();
  RVec g(n);
  for (Index i = 0; i < b; ++i) g(i) = g(b + i) = t.F(r(i), rho);
  const CMat D = dop.to_dense();
  const CMat c1 = g.asDiagonal() * a - a * g.asDiagonal();
  const CMat c2 = D * a - a * D;
  auto snorm = [](const CMat& m) {
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues()(0);
  };
  TaperCheck out;
  out.lhs = snorm(c1);
  out.rhs = t.fourier_l1() / rho * snorm(c2);
  out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
  return out;
}

}  // namespace sloc
