/**
 * JSON readers and writers for the file formats the command line accepts.
 * Every reader throws ValidationError on malformed or inconsistent input;
 * scalars are exact strings ("3", "-1/2") and are never read as floats.
 */
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hochkit/algebra.hpp"
#include "hochkit/colim.hpp"
#include "hochkit/glue.hpp"
#include "hochkit/simplicial.hpp"

namespace hochkit::io {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Throws ValidationError when the file is missing or not JSON.
Json read_json_file(const std::string& path);
/// Writes text followed by a newline; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);

/// {"field": "Q" | {"Fp": p}, "basis": [{"name", "degree"}], "unit": [..],
///  "table": table[i][j] = [..], "commutative": bool}. With an override the
/// scalar strings are read in that field instead, so denominators divisible
/// by p are rejected.
GradedAlgebra algebra_from_json(const Json& j, const std::optional<Field>& override = std::nullopt);
GradedAlgebra load_algebra(const std::string& path, const std::optional<Field>& override = std::nullopt);
OrderedJson algebra_to_json(const GradedAlgebra& a);

/// {"cells": [{"dim", "name", "faces": [{"base", "word"}]}]}.
SimplicialSet space_from_json(const Json& j);
/// A builtin descriptor ("circle:min", "sphere:2", …) or a path ending in .json.
SimplicialSet resolve_space(const std::string& descriptor);

/// {"objects": [{"name", "components"}], "relations": [[lower, upper], …]};
/// a relation may carry a third entry listing, for each component of
/// `lower`, the component of `upper` containing it.
Poset poset_from_json(const Json& j);

/// "regular" or {"degrees": [..], "action": [[..], …]} with action[a * dim + m]
/// the dense vector e_a · e_m. Validated against A.
LeftModule module_from_json(const Json& j, const GradedAlgebra& a);
/// A path, or the word "regular".
LeftModule resolve_module(const std::string& spec, const GradedAlgebra& a);

/// {"images": [[..], …]}: dense image of each source basis element. Validated.
AlgebraMap map_from_json(const Json& j, const GradedAlgebra& source, const GradedAlgebra& target);

} // namespace hochkit::io
