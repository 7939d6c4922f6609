#include "sloc/localizer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace sloc {

Validity validate_params(const SpectralData& sd, const LocalizerParams& p) {
  if (!(p.kappa > 0.0) || !std::isfinite(p.kappa)) throw DomainError("kappa must be positive");
  if (!(p.rho >= 1.0) || !std::isfinite(p.rho)) throw DomainError("rho must be >= 1");
  const double g = sd.gap, nh = std::max(sd.norm, 1.0), c = sd.commutator_norm;
  Validity v;
  v.commutator_limit = g * g * g / (12.0 * nh * p.kappa);
  v.kappa_min = 2.0 * g / p.rho;
  v.kappa_max = c > 0.0 ? g * g * g / (12.0 * nh * c) : INFINITY;
  v.rho_min_sufficient = 24.0 * nh * c / (g * g);
  v.commutator_ok = c <= v.commutator_limit;
  v.radius_ok = 2.0 * g / p.kappa < p.rho;
  v.valid = v.commutator_ok && v.radius_ok;
  if (!v.commutator_ok) v.reason = "kappa too large for the commutator bound";
  if (!v.radius_ok) v.reason += std::string(v.reason.empty() ? "" : "; ") + "rho too small for kappa";
  return v;
}

HermitianOperator assemble_localizer(const HermitianOperator& h, const DiracData& d, double kappa) {
  if (h.basis().spinor_dim != 1 || !h.basis().region->same_sites(*d.region))
    throw BasisMismatchError("Hamiltonian and Dirac data live on different regions");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const int n = h.basis().internal_dim;
  const Index b = h.dim();
  const BasisMap basis = h.basis().doubled();
  if (h.is_dense()) {
    CMat l = CMat::Zero(2 * b, 2 * b);
    l.topLeftCorner(b, b) = h.dense();
    l.bottomRightCorner(b, b) = -h.dense();
    for (Index s = 0; s < d.sites(); ++s)
      for (int a = 0; a < n; ++a) {
        const Index i = s * n + a;
        const cplx z = kappa * cplx(d.d1(s), d.d2(s));
        l(b + i, i) = z;
        l(i, b + i) = std::conj(z);
      }
    return {basis, std::move(l)};
  }
  const SpMat& hs = h.sparse();
  std::vector<Eigen::Triplet<cplx, Index>> trip;
  trip.reserve(static_cast<size_t>(2 * hs.nonZeros() + 2 * b));
  for (Index j = 0; j < hs.outerSize(); ++j)
    for (SpMat::InnerIterator it(hs, j); it; ++it) {
      trip.emplace_back(it.row(), j, it.value());
      trip.emplace_back(b + it.row(), b + j, -it.value());
    }
  for (Index s = 0; s < d.sites(); ++s)
    for (int a = 0; a < n; ++a) {
      const Index i = s * n + a;
      const cplx z = kappa * cplx(d.d1(s), d.d2(s));
      trip.emplace_back(b + i, i, z);
      trip.emplace_back(i, b + i, std::conj(z));
    }
  SpMat l(2 * b, 2 * b);
  l.setFromTriplets(trip.begin(), trip.end());
  return {basis, std::move(l)};
}

namespace {

double normalization_scale(const SpectralData& sd) {
  return sd.norm < 1.0 - 1e-9 ? 1.0 / sd.gap : 1.0;
}

LocalizerResult run_pairing(const HermitianOperator& h, const SpectralData& sd, const LocalizerParams& p,
                            const PairingOptions& opt, double scale) {
  const auto t0 = std::chrono::steady_clock::now();
  LocalizerResult r;
  r.params = p;
  r.scale = scale;
  SpectralData ssd = sd;
  ssd.gap *= scale;
  ssd.norm *= scale;
  ssd.commutator_norm *= scale;
  r.validity = validate_params(ssd, p);
  const auto dirac = build_dirac(h.basis().region);
  const auto l = assemble_localizer(h, dirac, p.kappa);
  r.dim = l.dim();
  ShiftedInertia si(l, opt.backend);
  if (opt.zero_tol) {
    r.zero_tol = *opt.zero_tol;
  } else if (r.validity.valid) {
    r.zero_tol = ssd.gap / 4.0;
  } else {
    r.zero_tol = 1e-8 * l.inf_norm();
  }
  bool done = false;
  if (opt.check_gap_bound && r.validity.valid) {
    const double half = ssd.gap / 2.0;
    if (si.backend() != InertiaBackend::Eigen && !opt.zero_tol) {
      // With (-g/2, g/2) empty the two factorizations at +-g/2 already give the counts.
      bool b1 = false, b2 = false;
      const Inertia hi = si.at(half, &b1);
      const Inertia lo = si.at(-half, &b2);
      if (!b1 && !b2) {
        r.eigs_in_half_gap = hi.neg - (lo.neg + lo.zero);
        if (*r.eigs_in_half_gap == 0) {
          r.inertia.n_plus = hi.pos + hi.zero;
          r.inertia.n_minus = lo.neg + lo.zero;
          r.inertia.n_zero = 0;
          r.inertia.zero_tol = r.zero_tol;
          r.inertia.backend = si.backend();
          done = true;
        }
      }
    }
    if (!r.eigs_in_half_gap) r.eigs_in_half_gap = si.count_open(-half, half);
  }
  if (!done) r.inertia = si.counts(r.zero_tol);
  r.half_signature = static_cast<long>(r.inertia.n_plus - r.inertia.n_minus) / 2;
  r.ambiguous = r.inertia.n_zero > 0 || (r.inertia.n_plus - r.inertia.n_minus) % 2 != 0;
  if (opt.compute_min_eig) r.min_abs_eig = si.min_abs_eig(opt.lanczos);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

LocalizerResult half_signature_pairing(const HermitianOperator& h, const SpectralData& sd,
                                       const LocalizerParams& p, const PairingOptions& opt) {
  const double scale = normalization_scale(sd);
  if (scale == 1.0) return run_pairing(h, sd, p, opt, 1.0);
  const HermitianOperator hs = h.is_dense() ? HermitianOperator(h.basis(), CMat(scale * h.dense()))
                                            : HermitianOperator(h.basis(), SpMat(scale * h.sparse()));
  return run_pairing(hs, sd, p, opt, scale);
}

LocalizerResult half_signature_pairing(const TightBindingModel& model, const SpectralData& sd,
                                       const LocalizerParams& p, const PairingOptions& opt) {
  validate_params(sd, p);
  const auto region = make_region(p.shape, p.rho);
  const double scale = normalization_scale(sd);
  const auto h = build_hamiltonian(scale == 1.0 ? model : model.scaled(scale), region);
  return run_pairing(h, sd, p, opt, scale);
}

int default_threads() {
  if (const char* e = std::getenv("LOCALIZER_THREADS")) {
    const int t = std::atoi(e);
    if (t >= 1) return t;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SweepRow> sweep(const TightBindingModel& model, const SpectralData& sd,
                            const std::vector<double>& kappas, const std::vector<double>& rhos,
                            Shape shape, const PairingOptions& opt, int threads) {
  for (double k : kappas)
    if (!(k > 0.0)) throw DomainError("kappa must be positive");
  for (double r : rhos)
    if (!(r >= 1.0)) throw DomainError("rho must be >= 1");
  std::vector<SweepRow> rows(kappas.size() * rhos.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < rows.size();) {
      const double rho = rhos[i / kappas.size()];
      const double kappa = kappas[i % kappas.size()];
      const auto r = half_signature_pairing(model, sd, {kappa, rho, shape}, opt);
      SweepRow& row = rows[i];
      row.kappa = kappa;
      row.rho = rho;
      row.valid = r.validity.valid;
      row.n_plus = r.inertia.n_plus;
      row.n_minus = r.inertia.n_minus;
      row.n_zero = r.inertia.n_zero;
      row.half_signature = r.half_signature;
      row.min_abs_eig = r.min_abs_eig;
      row.eigs_in_half_gap = r.eigs_in_half_gap;
      row.wall_ms = r.wall_ms;
    }
  };
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < t; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace sloc
