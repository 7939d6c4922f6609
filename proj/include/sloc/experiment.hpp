#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sloc/flatten.hpp"
#include "sloc/linalg/inertia.hpp"
#include "sloc/localizer.hpp"
#include "sloc/model.hpp"
#include "sloc/spectral.hpp"

namespace sloc {

// Resolved run configuration; its JSON form is hashed into every output.
struct ExperimentConfig {
  std::string model = "qwz";
  double m = 1.0;
  std::string model_file;  // JSON model document, overrides `model`
  bool flat = false;       // use the Bloch-flattened Hamiltonian
  double kappa = 0.1;
  double rho = 16.0;
  Shape shape = Shape::Disc;
  int nk = 128;
  std::uint64_t seed = 1;
  InertiaBackend backend = InertiaBackend::Auto;
  GapMethod gap_method = GapMethod::Bloch;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  std::string hash() const;
};

// Model described by the configuration (flattened when requested).
TightBindingModel make_model(const ExperimentConfig& c);

// Parses "a:b:n" (n evenly spaced points), "a,b,c" lists or a single value.
std::vector<double> parse_grid(const std::string& text);

// CSV with a commented header carrying the configuration and its hash.
void write_sweep_csv(std::ostream& out, const nlohmann::json& config, const std::vector<SweepRow>& rows,
                     bool timing = true);

nlohmann::json result_to_json(const LocalizerResult& r, const SpectralData& sd);

}  // namespace sloc
