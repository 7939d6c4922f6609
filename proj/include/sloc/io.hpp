#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sloc/model.hpp"

namespace sloc {

// {"internal_dim": N, "hoppings": [{"d": [dx, dy], "re": [[...]], "im": [[...]]}, ...]}
// with row-major N x N blocks; "im" may be omitted. Adjoint partners are optional.
TightBindingModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const TightBindingModel& m);
TightBindingModel load_model(const std::string& path);

// Complex Hermitian coordinate format, lower triangle, 1-based indices. The
// header documents the basis ordering of `op`.
void write_matrix_market(const HermitianOperator& op, std::ostream& out, const std::string& comment = "");
void write_matrix_market(const HermitianOperator& op, const std::string& path, const std::string& comment = "");
HermitianOperator read_matrix_market(std::istream& in, const BasisMap& basis);

// 64-bit FNV-1a of the canonical (sorted-key) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// Shortest round-trip decimal representation.
std::string fmt_double(double v);

}  // namespace sloc
