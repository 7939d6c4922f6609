#include "sloc/experiment.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "sloc/io.hpp"

namespace sloc {

using nlohmann::json;

json ExperimentConfig::to_json() const {
  json j{{"model", model},
         {"m", m},
         {"flat", flat},
         {"kappa", kappa},
         {"rho", rho},
         {"shape", to_string(shape)},
         {"nk", nk},
         {"seed", seed},
         {"backend", to_string(backend)},
         {"gap_method", gap_method == GapMethod::Bloch ? "bloch" : "region"}};
  if (!model_file.empty()) j["model_file"] = model_file;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.model = j.value("model", c.model);
    c.m = j.value("m", c.m);
    c.model_file = j.value("model_file", c.model_file);
    c.flat = j.value("flat", c.flat);
    c.kappa = j.value("kappa", c.kappa);
    c.rho = j.value("rho", c.rho);
    c.shape = parse_shape(j.value("shape", to_string(c.shape)));
    c.nk = j.value("nk", c.nk);
    c.seed = j.value("seed", c.seed);
    c.backend = parse_backend(j.value("backend", std::string("auto")));
    const std::string gm = j.value("gap_method", std::string("bloch"));
    if (gm != "bloch" && gm != "region") throw ConfigError("unknown gap method '" + gm + "'");
    c.gap_method = gm == "bloch" ? GapMethod::Bloch : GapMethod::Region;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

std::string ExperimentConfig::hash() const { return config_hash(to_json()); }

TightBindingModel make_model(const ExperimentConfig& c) {
  TightBindingModel base = [&] {
    if (!c.model_file.empty()) return load_model(c.model_file);
    if (c.model == "qwz") return TightBindingModel::qwz(c.m);
    throw ConfigError("unknown model '" + c.model + "'");
  }();
  if (!c.flat) return base;
  return *flatten(base).model;
}

std::vector<double> parse_grid(const std::string& text) {
  auto num = [&](const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw ConfigError("bad number '" + s + "' in grid '" + text + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + s + "' in grid '" + text + "'");
    }
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("grid must be a:b:n, got '" + text + "'");
    const double a = num(parts[0]), b = num(parts[1]);
    const double nd = num(parts[2]);
    const int n = static_cast<int>(nd);
    if (n < 1 || nd != n) throw ConfigError("grid point count must be a positive integer");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

void write_sweep_csv(std::ostream& out, const json& config, const std::vector<SweepRow>& rows, bool timing) {
  out << "# config_hash: " << config_hash(config) << "\n";
  out << "# config: " << config.dump() << "\n";
  out << "kappa,rho,valid,n_plus,n_minus,n_zero,half_signature,min_abs_eig,wall_ms\n";
  for (const auto& r : rows) {
    out << fmt_double(r.kappa) << "," << fmt_double(r.rho) << "," << (r.valid ? 1 : 0) << "," << r.n_plus << ","
        << r.n_minus << "," << r.n_zero << "," << r.half_signature << ","
        << (std::isnan(r.min_abs_eig) ? std::string() : fmt_double(r.min_abs_eig)) << ","
        << (timing ? fmt_double(std::round(r.wall_ms * 1000.0) / 1000.0) : std::string("0")) << "\n";
  }
}

json result_to_json(const LocalizerResult& r, const SpectralData& sd) {
  json v{{"commutator_ok", r.validity.commutator_ok},
         {"radius_ok", r.validity.radius_ok},
         {"valid", r.validity.valid},
         {"commutator_limit", r.validity.commutator_limit},
         {"kappa_min", r.validity.kappa_min},
         {"kappa_max", r.validity.kappa_max},
         {"rho_min_sufficient", r.validity.rho_min_sufficient}};
  if (!r.validity.reason.empty()) v["reason"] = r.validity.reason;
  json j{{"kappa", r.params.kappa},
         {"rho", r.params.rho},
         {"shape", to_string(r.params.shape)},
         {"dim", r.dim},
         {"n_plus", r.inertia.n_plus},
         {"n_minus", r.inertia.n_minus},
         {"n_zero", r.inertia.n_zero},
         {"zero_tol", r.zero_tol},
         {"half_signature", r.half_signature},
         {"ambiguous", r.ambiguous},
         {"backend", to_string(r.inertia.backend)},
         {"fell_back", r.inertia.fell_back},
         {"scale", r.scale},
         {"validity", v},
         {"spectral",
          {{"gap", sd.gap},
           {"norm", sd.norm},
           {"commutator_norm", sd.commutator_norm},
           {"commutator_section", sd.commutator_section},
           {"commutator_symbol", sd.commutator_symbol}}}};
  if (!std::isnan(r.min_abs_eig)) j["min_abs_eig"] = r.min_abs_eig;
  if (r.eigs_in_half_gap) j["eigs_in_half_gap"] = *r.eigs_in_half_gap;
  return j;
}

}  // namespace sloc
