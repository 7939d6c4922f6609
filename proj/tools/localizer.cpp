// Command-line front end: compute, sweep, fuzzy, oracle, crosscheck.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sloc/experiment.hpp"
#include "sloc/fuzzy.hpp"
#include "sloc/io.hpp"
#include "sloc/localizer.hpp"
#include "sloc/oracle.hpp"

using namespace sloc;
using nlohmann::json;

namespace {

constexpr Index kDumpLimit = 20000;

struct Common {
  ExperimentConfig cfg;
  std::string shape = "disc";
  std::string backend = "auto";
  std::string gap_method = "bloch";
  std::string config_file;
  std::string out;
  std::string dump_matrix;
  bool force = false;
};

void add_common(CLI::App* app, Common& c, bool scalar_params = true) {
  app->add_option("--config", c.config_file, "JSON configuration file (flags override it)");
  app->add_option("--model", c.cfg.model, "Model preset (qwz)");
  app->add_option("--model-file", c.cfg.model_file, "JSON hopping document");
  app->add_option("--m", c.cfg.m, "QWZ mass parameter");
  app->add_flag("--flat", c.cfg.flat, "Use the flattened Hamiltonian 1 - 2P");
  if (scalar_params) {
    app->add_option("--kappa", c.cfg.kappa, "Tuning parameter");
    app->add_option("--rho", c.cfg.rho, "Disc radius");
  }
  app->add_option("--shape", c.shape, "Region shape")->check(CLI::IsMember({"disc", "square"}));
  app->add_option("--nk", c.cfg.nk, "Brillouin-zone grid size");
  app->add_option("--seed", c.cfg.seed, "RNG seed");
  app->add_option("--backend", c.backend, "Inertia backend")
      ->check(CLI::IsMember({"auto", "dense", "sparse", "eigen"}));
  app->add_option("--gap-method", c.gap_method, "Gap estimate")->check(CLI::IsMember({"bloch", "region"}));
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--dump-matrix", c.dump_matrix, "Write the assembled matrix in Matrix Market format");
  app->add_flag("--force", c.force, "Allow matrix dumps above 20000 dimensions");
}

// Merges the optional config file under explicitly given flags.
ExperimentConfig resolve(CLI::App* app, Common& c) {
  ExperimentConfig cfg = c.cfg;
  if (!c.config_file.empty()) {
    std::ifstream in(c.config_file);
    if (!in) throw ConfigError("cannot open config '" + c.config_file + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig base = ExperimentConfig::from_json(j);
    json merged = base.to_json();
    const json flags = cfg.to_json();
    for (const auto& [key, opt] : std::map<std::string, std::string>{{"model", "--model"},
                                                                      {"model_file", "--model-file"},
                                                                      {"m", "--m"},
                                                                      {"flat", "--flat"},
                                                                      {"kappa", "--kappa"},
                                                                      {"rho", "--rho"},
                                                                      {"shape", "--shape"},
                                                                      {"nk", "--nk"},
                                                                      {"seed", "--seed"},
                                                                      {"backend", "--backend"},
                                                                      {"gap_method", "--gap-method"}})
      if (app->count(opt) > 0) merged[key] = key == "shape" ? json(c.shape)
                                             : key == "backend" ? json(c.backend)
                                             : key == "gap_method" ? json(c.gap_method)
                                                                   : flags.value(key, json());
    cfg = ExperimentConfig::from_json(merged);
  } else {
    cfg.shape = parse_shape(c.shape);
    cfg.backend = parse_backend(c.backend);
    cfg.gap_method = c.gap_method == "bloch" ? GapMethod::Bloch : GapMethod::Region;
  }
  if (cfg.nk < 8) throw ConfigError("--nk must be at least 8");
  return cfg;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& operator*() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const std::string& path, const json& j) { *Output(path) << j.dump(2) << "\n"; }

void csv_header(std::ostream& os, const json& config) {
  os << "# config_hash: " << config_hash(config) << "\n# config: " << config.dump() << "\n";
}

void maybe_dump(const Common& c, const HermitianOperator& op, const json& config) {
  if (c.dump_matrix.empty()) return;
  if (op.dim() > kDumpLimit && !c.force)
    throw ConfigError("matrix dimension " + std::to_string(op.dim()) + " exceeds 20000; pass --force to dump");
  write_matrix_market(op, c.dump_matrix, "config_hash: " + config_hash(config) + "\nconfig: " + config.dump());
}

SpectralOptions spectral_options(const ExperimentConfig& cfg) {
  SpectralOptions so;
  so.nk = cfg.nk;
  so.gap_method = cfg.gap_method;
  return so;
}

int run_compute(CLI::App* app, Common& c) {
  const ExperimentConfig cfg = resolve(app, c);
  const auto model = make_model(cfg);
  if (!c.dump_matrix.empty() && !c.force) {
    const Index dim = 2 * model.internal_dim() * make_region(cfg.shape, cfg.rho)->size();
    if (dim > kDumpLimit)
      throw ConfigError("matrix dimension " + std::to_string(dim) + " exceeds 20000; pass --force to dump");
  }
  const SpectralData sd = spectral_data(model, spectral_options(cfg));
  PairingOptions opt;
  opt.backend = cfg.backend;
  const LocalizerParams p{cfg.kappa, cfg.rho, cfg.shape};
  const LocalizerResult r = half_signature_pairing(model, sd, p, opt);
  json out = cfg.to_json();
  json doc{{"config", out}, {"config_hash", cfg.hash()}, {"result", result_to_json(r, sd)}};
  doc["result"]["wall_ms"] = r.wall_ms;
  emit_json(c.out, doc);
  if (!c.dump_matrix.empty()) {
    const auto region = make_region(cfg.shape, cfg.rho);
    const double s = r.scale;
    const auto h = build_hamiltonian(s == 1.0 ? model : model.scaled(s), region);
    maybe_dump(c, assemble_localizer(h, build_dirac(region), cfg.kappa), out);
  }
  return 0;
}

int run_sweep(CLI::App* app, Common& c, const std::string& kappas, const std::string& rhos, int threads,
              bool no_timing) {
  const ExperimentConfig cfg = resolve(app, c);
  const auto kg = parse_grid(kappas);
  const auto rg = parse_grid(rhos);
  const auto model = make_model(cfg);
  const SpectralData sd = spectral_data(model, spectral_options(cfg));
  PairingOptions opt;
  opt.backend = cfg.backend;
  const auto rows = sweep(model, sd, kg, rg, cfg.shape, opt, threads > 0 ? threads : default_threads());
  json config = cfg.to_json();
  config.erase("kappa");
  config.erase("rho");
  config["kappa_grid"] = kappas;
  config["rho_grid"] = rhos;
  Output o(c.out);
  write_sweep_csv(*o, config, rows, !no_timing);
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  if (s.empty()) throw ConfigError("empty list");
  return parse_grid(s);
}

TaperPair shared_taper() { return make_taper(); }

int run_fuzzy_width(CLI::App* app, Common& c, const std::string& rho_list) {
  ExperimentConfig cfg = resolve(app, c);
  cfg.flat = true;
  const auto model = make_model(cfg);
  const TaperPair taper = shared_taper();
  json config = cfg.to_json();
  config.erase("kappa");
  config.erase("rho");
  config["rho_list"] = rho_list;
  Output o(c.out);
  csv_header(*o, config);
  *o << "rho,width,sum_squares,c12,c13,c23\n";
  for (double rho : parse_list(rho_list)) {
    const auto h = build_hamiltonian(model, make_region(cfg.shape, rho));
    const auto w = fuzzy_width_parts(build_fuzzy_sphere(h, taper, rho));
    *o << fmt_double(rho) << "," << fmt_double(w.width()) << "," << fmt_double(w.sum_squares) << ","
       << fmt_double(w.c12) << "," << fmt_double(w.c13) << "," << fmt_double(w.c23) << "\n";
  }
  return 0;
}

int run_fuzzy_map(CLI::App* app, Common& c, const std::string& choice, double lambda) {
  ExperimentConfig cfg = resolve(app, c);
  cfg.flat = true;
  const auto model = make_model(cfg);
  const auto h = build_hamiltonian(model, make_region(cfg.shape, cfg.rho));
  const auto x = build_fuzzy_sphere(h, shared_taper(), cfg.rho);
  const SphereMapFunctions g(parse_sphere_map(choice));
  const auto z = map_fuzzy_sphere(x, g, lambda);
  const auto px = sphere_signature(x);
  const auto pz = sphere_signature(z);
  json config = cfg.to_json();
  config.erase("kappa");
  config["sphere_map"] = choice;
  config["lambda"] = lambda;
  emit_json(c.out, {{"config", config},
                    {"config_hash", config_hash(config)},
                    {"X", {{"width", fuzzy_width(x)}, {"half_signature", px.half_signature}, {"min_abs_eig", px.min_abs_eig}}},
                    {"Z", {{"width", fuzzy_width(z)}, {"half_signature", pz.half_signature}, {"min_abs_eig", pz.min_abs_eig}}}});
  maybe_dump(c, sphere_to_matrix(z), config);
  return 0;
}

int run_fuzzy_degree(Common& c, const std::string& grid, const std::string& map, const std::string& choice,
                     double lambda) {
  int nt = 0, np = 0;
  char sep = 0;
  std::istringstream gs(grid);
  if (!(gs >> nt >> sep >> np) || sep != 'x') throw ConfigError("grid must look like 400x200");
  DegreeResult d;
  if (map == "identity") {
    d = mapping_degree([](const Vec3& x) { return x; }, nt, np);
  } else if (map == "antipode") {
    d = mapping_degree([](const Vec3& x) { return Vec3{-x[0], -x[1], -x[2]}; }, nt, np);
  } else {
    d = mapping_degree(SphereMapFunctions(parse_sphere_map(choice)), nt, np, lambda);
  }
  json config{{"map", map}, {"sphere_map", choice}, {"lambda", lambda}, {"grid", grid}};
  emit_json(c.out, {{"config", config},
                    {"config_hash", config_hash(config)},
                    {"degree", d.degree},
                    {"rounded", d.rounded},
                    {"residual", std::abs(d.degree - double(d.rounded))}});
  return 0;
}

int run_fuzzy_homotopy(CLI::App* app, Common& c, int steps, const std::string& kind, const std::string& choice) {
  ExperimentConfig cfg = resolve(app, c);
  cfg.flat = true;
  if (steps < 2) throw ConfigError("--steps must be at least 2");
  const auto model = make_model(cfg);
  const auto h = build_hamiltonian(model, make_region(cfg.shape, cfg.rho));
  const TaperPair taper = shared_taper();
  std::vector<HomotopyPoint> pts;
  if (kind == "localizer") {
    for (int i = 0; i < steps; ++i) {
      const double lam = double(i) / (steps - 1);
      const auto x = localizer_sphere_homotopy(h, taper, cfg.kappa, cfg.rho, lam);
      HomotopyPoint p = sphere_signature(x);
      p.lambda = lam;
      p.width = fuzzy_width(x);
      pts.push_back(p);
    }
  } else {
    pts = fuzzy_homotopy(build_fuzzy_sphere(h, taper, cfg.rho), SphereMapFunctions(parse_sphere_map(choice)), steps,
                         true);
  }
  json config = cfg.to_json();
  config["kind"] = kind;
  config["steps"] = steps;
  if (kind == "map") {
    config["sphere_map"] = choice;
    config.erase("kappa");
  }
  Output o(c.out);
  csv_header(*o, config);
  *o << "lambda,min_abs_eig,half_signature,width\n";
  for (const auto& p : pts)
    *o << fmt_double(p.lambda) << "," << fmt_double(p.min_abs_eig) << "," << p.half_signature << ","
       << fmt_double(p.width) << "\n";
  return 0;
}

int run_oracle_chern(CLI::App* app, Common& c) {
  const ExperimentConfig cfg = resolve(app, c);
  const auto r = chern_number(make_model(cfg), cfg.nk);
  json config = cfg.to_json();
  emit_json(c.out, {{"config", config},
                    {"config_hash", config_hash(config)},
                    {"chern", r.chern},
                    {"raw", r.raw},
                    {"residual", r.residual},
                    {"nk", r.nk}});
  return 0;
}

json fredholm_json(const FredholmEstimate& f) {
  return {{"index", f.index},
          {"dim_ker_T", f.dim_ker_T},
          {"dim_ker_Tstar", f.dim_ker_Tstar},
          {"boundary_ker_T", f.boundary_ker_T},
          {"boundary_ker_Tstar", f.boundary_ker_Tstar},
          {"threshold", f.threshold},
          {"separation", f.separation},
          {"worst_localization", f.worst_localization},
          {"reliable", f.reliable}};
}

int run_oracle_fredholm(CLI::App* app, Common& c) {
  ExperimentConfig cfg = resolve(app, c);
  FredholmOptions fo;
  if (app->count("--rho") > 0) fo.box_radius = cfg.rho;
  const auto f = fredholm_index_estimate(make_model(ExperimentConfig{cfg.model, cfg.m, cfg.model_file}), fo);
  json config = cfg.to_json();
  config["box_radius"] = fo.box_radius;
  emit_json(c.out, {{"config", config}, {"config_hash", config_hash(config)}, {"fredholm", fredholm_json(f)}});
  return 0;
}

int run_oracle_compare(CLI::App* app, Common& c, const std::string& rho_list, const std::string& choice,
                       bool positive) {
  ExperimentConfig cfg = resolve(app, c);
  cfg.flat = true;
  const auto model = make_model(cfg);
  const TaperPair taper = shared_taper();
  const SphereMapFunctions g(parse_sphere_map(choice));
  json config = cfg.to_json();
  config.erase("kappa");
  config.erase("rho");
  config["rho_list"] = rho_list;
  config["sphere_map"] = choice;
  config["positive_projection"] = positive;
  Output o(c.out);
  csv_header(*o, config);
  *o << "rho,dev1,dev2,dev3,max_dev,half_signature_Z,half_signature_Y,min_abs_eig_Z,min_abs_eig_Y\n";
  for (double rho : parse_list(rho_list)) {
    const auto h = build_hamiltonian(model, make_region(cfg.shape, rho));
    const auto z = map_fuzzy_sphere(build_fuzzy_sphere(h, taper, rho), g);
    const auto y = build_index_sphere(h, taper, g, rho, {positive});
    const auto r = compare_spheres(z, y);
    *o << fmt_double(rho) << "," << fmt_double(r.dev[0]) << "," << fmt_double(r.dev[1]) << ","
       << fmt_double(r.dev[2]) << "," << fmt_double(r.max_dev) << "," << r.half_signature_a << ","
       << r.half_signature_b << "," << fmt_double(r.min_abs_eig_a) << "," << fmt_double(r.min_abs_eig_b) << "\n";
  }
  return 0;
}

// Localizer half-signature on the flattened Hamiltonian against the Chern and
// Fredholm oracles; exit status 1 when they disagree.
int run_crosscheck(CLI::App* app, Common& c, double box_radius) {
  ExperimentConfig cfg = resolve(app, c);
  const ExperimentConfig raw{cfg.model, cfg.m, cfg.model_file};
  const auto base = make_model(raw);
  const SpectralData base_sd = spectral_data(base, spectral_options(cfg));  // throws when not an insulator
  (void)base_sd;
  const auto flat = flatten(base);
  const SpectralData sd = spectral_data(*flat.model, spectral_options(cfg));
  PairingOptions opt;
  opt.backend = cfg.backend;
  const auto r = half_signature_pairing(*flat.model, sd, {cfg.kappa, cfg.rho, cfg.shape}, opt);
  const auto ch = chern_number(base, cfg.nk);
  FredholmOptions fo;
  fo.box_radius = box_radius;
  const auto fr = fredholm_index_estimate(flat, fo);
  const bool chern_ok = r.half_signature == ch.chern && !r.ambiguous;
  const bool fred_ok = r.half_signature == fr.index;
  cfg.flat = true;
  json config = cfg.to_json();
  config["fredholm_box_radius"] = box_radius;
  emit_json(c.out, {{"config", config},
                    {"config_hash", config_hash(config)},
                    {"localizer", result_to_json(r, sd)},
                    {"chern", ch.chern},
                    {"fredholm", fredholm_json(fr)},
                    {"assertions",
                     {{"half_signature == chern", chern_ok}, {"half_signature == fredholm_index", fred_ok}}}});
  std::cerr << (chern_ok ? "PASS" : "FAIL") << " half_signature == chern (" << r.half_signature << " vs "
            << ch.chern << ")\n";
  std::cerr << (fred_ok ? "PASS" : "FAIL") << " half_signature == fredholm_index (" << r.half_signature << " vs "
            << fr.index << ")\n";
  return chern_ok && fred_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral localizer index pairings for lattice Hamiltonians"};
  app.require_subcommand(1);
  int status = 0;

  Common cc;
  auto* compute = app.add_subcommand("compute", "Half-signature of one localizer");
  add_common(compute, cc);
  compute->callback([&] { status = run_compute(compute, cc); });

  Common sc;
  std::string kgrid, rgrid;
  int threads = 0;
  bool no_timing = false;
  auto* sw = app.add_subcommand("sweep", "Half-signature over a (kappa, rho) grid, written as CSV");
  add_common(sw, sc, false);
  sw->add_option("--kappa", kgrid, "kappa grid: a:b:n or a comma list")->required();
  sw->add_option("--rho", rgrid, "rho grid: a:b:n or a comma list")->required();
  sw->add_option("--threads", threads, "Worker threads (default: LOCALIZER_THREADS or all cores)");
  sw->add_flag("--no-timing", no_timing, "Write 0 in the wall_ms column");
  sw->callback([&] { status = run_sweep(sw, sc, kgrid, rgrid, threads, no_timing); });

  auto* fuzzy = app.add_subcommand("fuzzy", "Fuzzy spheres built from a flattened Hamiltonian");
  fuzzy->require_subcommand(1);
  Common fw, fm, fd, fh;
  std::string width_rhos = "8,12,16,20,24", map_choice = "smooth", degree_grid = "400x200", degree_map = "sphere",
              hom_kind = "localizer";
  double map_lambda = 1.0, degree_lambda = 1.0;
  int steps = 11;
  auto* width = fuzzy->add_subcommand("width", "Width of the tapered sphere over a list of radii");
  add_common(width, fw);
  width->add_option("--rho-list", width_rhos, "Comma-separated radii");
  width->callback([&] { status = run_fuzzy_width(width, fw, width_rhos); });
  auto* fmap = fuzzy->add_subcommand("map", "Apply the sphere map to the tapered sphere");
  add_common(fmap, fm);
  fmap->add_option("--sphere-map", map_choice, "smooth or special")->check(CLI::IsMember({"smooth", "special"}));
  fmap->add_option("--lambda", map_lambda, "Deformation parameter in [0,1]");
  fmap->callback([&] { status = run_fuzzy_map(fmap, fm, map_choice, map_lambda); });
  auto* deg = fuzzy->add_subcommand("degree", "Mapping degree of a sphere map");
  add_common(deg, fd);
  deg->add_option("--grid", degree_grid, "theta x phi cells, e.g. 400x200");
  deg->add_option("--map", degree_map, "identity, antipode or sphere (the sphere map)")
      ->check(CLI::IsMember({"identity", "antipode", "sphere"}));
  deg->add_option("--sphere-map", map_choice, "smooth or special")->check(CLI::IsMember({"smooth", "special"}));
  deg->add_option("--lambda", degree_lambda, "Deformation parameter in [0,1]");
  deg->callback([&] { status = run_fuzzy_degree(fd, degree_grid, degree_map, map_choice, degree_lambda); });
  auto* hom = fuzzy->add_subcommand("homotopy", "Scan a sphere homotopy, written as CSV");
  add_common(hom, fh);
  hom->add_option("--steps", steps, "Number of lambda points");
  hom->add_option("--kind", hom_kind, "localizer (localizer to tapered sphere) or map (sphere-map deformation)")
      ->check(CLI::IsMember({"localizer", "map"}));
  hom->add_option("--sphere-map", map_choice, "smooth or special")->check(CLI::IsMember({"smooth", "special"}));
  hom->callback([&] { status = run_fuzzy_homotopy(hom, fh, steps, hom_kind, map_choice); });

  auto* oracle = app.add_subcommand("oracle", "Independent index computations");
  oracle->require_subcommand(1);
  Common oc, of, ocmp;
  std::string cmp_rhos = "8,12,16,20", cmp_choice = "smooth";
  bool positive = false;
  auto* chern = oracle->add_subcommand("chern", "Link-variable Chern number");
  add_common(chern, oc);
  chern->callback([&] { status = run_oracle_chern(chern, oc); });
  auto* fred = oracle->add_subcommand("fredholm", "Truncated Fredholm index of PFP + 1 - P (--rho sets the box)");
  add_common(fred, of);
  fred->callback([&] { status = run_oracle_fredholm(fred, of); });
  auto* cmp = oracle->add_subcommand("compare", "Compare the mapped sphere Z with the index sphere Y'");
  add_common(cmp, ocmp);
  cmp->add_option("--rho-list", cmp_rhos, "Comma-separated radii");
  cmp->add_option("--sphere-map", cmp_choice, "smooth or special")->check(CLI::IsMember({"smooth", "special"}));
  cmp->add_flag("--positive-projection", positive, "Use 1 - P in the index sphere (diagnostic)");
  cmp->callback([&] { status = run_oracle_compare(cmp, ocmp, cmp_rhos, cmp_choice, positive); });

  Common xc;
  double box = 16.0;
  auto* cross = app.add_subcommand("crosscheck", "Localizer vs Chern vs Fredholm on the flattened model");
  add_common(cross, xc);
  cross->add_option("--box-radius", box, "Fredholm truncation box");
  cross->callback([&] { status = run_crosscheck(cross, xc, box); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const NotInsulatorError& e) {
    std::cerr << "error: not an insulator: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
