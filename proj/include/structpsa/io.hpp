#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "structpsa/analysis.hpp"
#include "structpsa/boundary.hpp"
#include "structpsa/extremal.hpp"
#include "structpsa/structure.hpp"
#include "structpsa/tridiag.hpp"

namespace structpsa::io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "structpsa/1";

/// Real number from a JSON number or a string: decimal ("0.25") or an exact
/// rational ("10/19", divided once in double precision). Throws Parse.
double parse_real(const json& value, std::string_view field);

/// Matrix-spec JSON: {"n": 3, "orientation": "diagonal"|"antidiagonal",
/// "coeffs": [{"offset": 0, "re": 1, "im": 0}, ...]}. Offsets missing from
/// coeffs are not part of the structure. Throws Parse with field diagnostics.
StructuredMatrix parse_matrix(std::string_view text);
StructuredMatrix parse_matrix(const json& doc);

json serialize_matrix(const StructuredMatrix& t);

/// Named test matrices:
///   example1  n = 12 tridiagonal T((-1+i)/10, (-3+4i)/10, 2+i)
///   example2  n = 30 pentadiagonal, 10/19 on offsets +1 and -2
///   example3  n = 12 anti-tridiagonal Hankel counterpart of example1
/// Throws Parse for an unknown name.
StructuredMatrix preset(std::string_view name);

json complex_json(Complex z);
json trace_json(const IterationTrace& trace);
json rate_json(const RateEstimate& r);
json boundary_json(const BoundaryTrace& b);
json fixed_point_json(const tridiag::Problem& p, const tridiag::FixedPoint& fp);

}  // namespace structpsa::io
