#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sloc/dirac.hpp"
#include "sloc/linalg/inertia.hpp"
#include "sloc/model.hpp"
#include "sloc/spectral.hpp"

namespace sloc {

struct LocalizerParams {
  double kappa = 0.1;
  double rho = 16.0;
  Shape shape = Shape::Disc;
};

struct Validity {
  bool commutator_ok = false;  // ||[D,H]|| <= g^3 / (12 ||H|| kappa)
  bool radius_ok = false;      // 2 g / kappa < rho
  bool valid = false;
  double commutator_limit = 0.0;  // g^3 / (12 ||H|| kappa)
  double kappa_min = 0.0;         // 2 g / rho
  double kappa_max = 0.0;         // g^3 / (12 ||H|| c): largest kappa allowed by the commutator bound
  double rho_min_sufficient = 0.0; // 24 ||H|| c / g^2, reported only
  std::string reason;
};

// Throws DomainError for kappa <= 0 or rho < 1.
Validity validate_params(const SpectralData& sd, const LocalizerParams& p);

// [[H, kappa D0^*], [kappa D0, -H]] on the doubled basis of h.
HermitianOperator assemble_localizer(const HermitianOperator& h, const DiracData& d, double kappa);

struct PairingOptions {
  InertiaBackend backend = InertiaBackend::Auto;
  bool compute_min_eig = true;
  bool check_gap_bound = true;       // count eigenvalues in (-g/2, g/2) when valid
  std::optional<double> zero_tol;    // default: g/4 when valid, 1e-8 ||L|| otherwise
  LanczosOptions lanczos{};
};

struct LocalizerResult {
  LocalizerParams params;
  Validity validity;
  InertiaResult inertia;
  long half_signature = 0;
  bool ambiguous = false;  // zero modes present, signature not certified
  double min_abs_eig = NAN;
  std::optional<Index> eigs_in_half_gap;  // # eigenvalues in (-g/2, g/2)
  double zero_tol = 0.0;
  double scale = 1.0;  // factor applied to H when ||H|| < 1
  Index dim = 0;
  double wall_ms = 0.0;
};

// Half-signature of the localizer for the Hamiltonian `h_model` (the spectral
// data must describe the same model before any rescaling).
LocalizerResult half_signature_pairing(const TightBindingModel& h_model, const SpectralData& sd,
                                       const LocalizerParams& p, const PairingOptions& opt = {});

// Same, with a precomputed region Hamiltonian (e.g. a dense flattened one).
LocalizerResult half_signature_pairing(const HermitianOperator& h, const SpectralData& sd,
                                       const LocalizerParams& p, const PairingOptions& opt = {});

struct SweepRow {
  double kappa = 0.0;
  double rho = 0.0;
  bool valid = false;
  Index n_plus = 0, n_minus = 0, n_zero = 0;
  long half_signature = 0;
  double min_abs_eig = NAN;
  std::optional<Index> eigs_in_half_gap;
  double wall_ms = 0.0;
};

// Rows ordered by rho, then kappa. Work is spread over `threads` workers.
std::vector<SweepRow> sweep(const TightBindingModel& model, const SpectralData& sd,
                            const std::vector<double>& kappas, const std::vector<double>& rhos,
                            Shape shape, const PairingOptions& opt, int threads);

// Worker count from LOCALIZER_THREADS, else the hardware concurrency.
int default_threads();

}  // namespace sloc
