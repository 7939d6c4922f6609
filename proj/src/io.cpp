#include "sloc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sloc {

using nlohmann::json;

TightBindingModel model_from_json(const json& j) {
  try {
    const int n = j.at("internal_dim").get<int>();
    if (n < 1) throw ModelError("internal_dim must be positive");
    std::map<Displacement, CMat> hop;
    for (const auto& h : j.at("hoppings")) {
      const auto d = h.at("d").get<std::vector<int>>();
      if (d.size() != 2) throw ModelError("displacement must have two components");
      const auto re = h.at("re").get<std::vector<std::vector<double>>>();
      std::vector<std::vector<double>> im;
      if (h.contains("im")) im = h.at("im").get<std::vector<std::vector<double>>>();
      if (static_cast<int>(re.size()) != n || (!im.empty() && static_cast<int>(im.size()) != n))
        throw ModelError("hopping block has wrong number of rows");
      CMat t(n, n);
      for (int a = 0; a < n; ++a) {
        if (static_cast<int>(re[a].size()) != n || (!im.empty() && static_cast<int>(im[a].size()) != n))
          throw ModelError("hopping block has wrong number of columns");
        for (int b = 0; b < n; ++b) t(a, b) = cplx(re[a][b], im.empty() ? 0.0 : im[a][b]);
      }
      const Displacement key{d[0], d[1]};
      if (hop.count(key)) throw ModelError("duplicate displacement in model document");
      hop[key] = t;
    }
    return {n, std::move(hop)};
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

json model_to_json(const TightBindingModel& m) {
  json hops = json::array();
  for (const auto& [d, t] : m.hoppings()) {
    if (d < -d) continue;  // emit one of each adjoint pair
    std::vector<std::vector<double>> re(t.rows(), std::vector<double>(t.cols()));
    auto im = re;
    for (Index a = 0; a < t.rows(); ++a)
      for (Index b = 0; b < t.cols(); ++b) {
        re[a][b] = t(a, b).real();
        im[a][b] = t(a, b).imag();
      }
    hops.push_back({{"d", {d.dx, d.dy}}, {"re", re}, {"im", im}});
  }
  return {{"internal_dim", m.internal_dim()}, {"hoppings", hops}};
}

TightBindingModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ModelError("model file is not valid JSON: " + std::string(e.what()));
  }
  return model_from_json(j);
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_matrix_market(const HermitianOperator& op, std::ostream& out, const std::string& comment) {
  const BasisMap& b = op.basis();
  out << "%%MatrixMarket matrix coordinate complex hermitian\n";
  out << "% basis: index = s*(" << b.sites() << "*" << b.internal_dim << ") + site*" << b.internal_dim
      << " + a; spinor_dim " << b.spinor_dim << "\n";
  out << "% region: " << to_string(b.region->shape()) << " radius " << fmt_double(b.region->radius())
      << ", sites in lexicographic (x, y) order\n";
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string l; std::getline(lines, l);) out << "% " << l << "\n";
  }
  const SpMat s = op.to_sparse();
  Index nnz = 0;
  for (Index j = 0; j < s.outerSize(); ++j)
    for (SpMat::InnerIterator it(s, j); it; ++it)
      if (it.row() >= j) ++nnz;
  out << s.rows() << " " << s.cols() << " " << nnz << "\n";
  for (Index j = 0; j < s.outerSize(); ++j)
    for (SpMat::InnerIterator it(s, j); it; ++it)
      if (it.row() >= j)
        out << it.row() + 1 << " " << j + 1 << " " << fmt_double(it.value().real()) << " "
            << fmt_double(it.value().imag()) << "\n";
}

void write_matrix_market(const HermitianOperator& op, const std::string& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_matrix_market(op, out, comment);
}

HermitianOperator read_matrix_market(std::istream& in, const BasisMap& basis) {
  std::string line;
  std::getline(in, line);
  if (line.rfind("%%MatrixMarket matrix coordinate complex hermitian", 0) != 0)
    throw ConfigError("unsupported Matrix Market header");
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream hdr(line);
  Index rows = 0, cols = 0, nnz = 0;
  hdr >> rows >> cols >> nnz;
  if (rows != basis.dim() || cols != basis.dim()) throw BasisMismatchError("matrix size does not match basis");
  std::vector<Eigen::Triplet<cplx, Index>> trip;
  for (Index k = 0; k < nnz; ++k) {
    Index i, j;
    double re, im;
    if (!(in >> i >> j >> re >> im)) throw ConfigError("truncated Matrix Market body");
    trip.emplace_back(i - 1, j - 1, cplx(re, im));
    if (i != j) trip.emplace_back(j - 1, i - 1, cplx(re, -im));
  }
  SpMat s(rows, cols);
  s.setFromTriplets(trip.begin(), trip.end());
  return {basis, std::move(s)};
}

std::string config_hash(const json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sloc
