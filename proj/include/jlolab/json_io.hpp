#pragma once

#include <filesystem>

#include <json.hpp>

#include "jlolab/chains.hpp"
#include "jlolab/combinatorics.hpp"
#include "jlolab/spectral.hpp"

namespace jlolab {

using Json = nlohmann::json;

/// {"rows", "cols", "entries": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"algebra_dim", "terms": [{"coeff": [re, im], "factors": [matrix, ...]}]}
Json chain_to_json(const Chain& chain);
Chain chain_from_json(const Json& j);

/// {"dim_even", "dim_odd", "D": matrix, "generators": [matrix, ...]}
Json triple_to_json(const SpectralTripleFD& triple);
SpectralTripleFD triple_from_json(const Json& j);

/// {"k", "e": matrix}
Json idempotent_to_json(const Idempotent& e);
Idempotent idempotent_from_json(const Json& j);

/// {"images": [1-based images], "sign"}
Json permutation_to_json(const SignedPermutation& p);

/// Reads and parses a JSON file; every failure is reported as ParseError.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace jlolab
