#pragma once

// JSON encoding of operators, states and certificates.
//
// Operator files: {"dims":[M,N], "matrix":[[[re,im], ...], ...]}, row-major.
// Certificate files: {"precisionBits":k, "terms":[{"p":..., "alpha":[[re,im],...],
// "beta":[...]}, ...]}.

#include <string>

#include "json.hpp"
#include "sepscope/cert.hpp"
#include "sepscope/hermops.hpp"

namespace sepscope {

using Json = nlohmann::ordered_json;

HermitianOp parse_operator(const Json& j);
DensityMatrix parse_state(const Json& j);
SeparableCertificate parse_certificate(const Json& j);

Json complex_vector_json(const CVector& v);
Json complex_matrix_json(const CMatrix& m);
Json operator_json(const HermitianOp& a);
Json real_vector_json(const RVector& v);

/// Serialises with every double printed to 17 significant digits so that
/// values round-trip exactly. indent < 0 gives a single line.
std::string dump_json(const Json& j, int indent = 2);

Json read_json_file(const std::string& path);

}  // namespace sepscope
