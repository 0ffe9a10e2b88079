#pragma once

#include <json.hpp>

#include <string>

#include "chol/blockrep.hpp"
#include "chol/family.hpp"

namespace chol::io {

using nlohmann::json;

// Parses text, turning syntax errors into MalformedInput that names the
// byte offset.
json parse(const std::string& text);

// {"kind": "sym"|"gen"|"skew", "rows": r, "cols": c, "entries": [...]}.
// Entries are listed row-major over the free coordinates; each is a number
// or a [re, im] pair.
Point point_from_json(const json& j, const std::string& where = "");
json point_to_json(const Point& p);
// Full matrix written as a "gen" matrix.
json matrix_to_json(const CMatrix& a);

// {"kind": <factorization kind>, "samples": [matrix, ...]}. The size
// parameter m is inferred from the first sample.
MatrixLoop loop_from_json(const json& j);
json loop_to_json(const MatrixLoop& loop);

// Array of coordinate-name arrays, innermost step first.
Filtration filtration_from_json(const json& j, const MatrixSpace& space);
json filtration_to_json(const Filtration& f, const MatrixSpace& space);

// {"text": "...", "terms": [{"coefficient": ["re", "im"], "exponents": [...]}]}
json polynomial_to_json(const Polynomial& p, const std::vector<std::string>& names);

json factorization_to_json(const Factorization& f);

json complex_to_json(cplx z);

}  // namespace chol::io
