#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "densecode/model.hpp"

namespace densecode {

/// Contents of a scheme file:
///   {"d": int, "lambda": [real...], "unitaries": [[[[re, im], ...], ...], ...]}
/// Each unitary is a d x d nested array of [re, im] pairs, row by row.
/// Extra keys are ignored so result files can embed a scheme.
struct SchemeFile {
  SchmidtSpectrum spectrum;
  EncodingScheme scheme;
};

/// Validates every invariant and throws on the first violation. An
/// unsorted lambda is accepted; the columns of each unitary are permuted
/// along with it so the Gram matrix is unchanged.
SchemeFile parse_scheme(const nlohmann::json& j);
SchemeFile read_scheme_file(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json scheme_to_json(const EncodingScheme& scheme, const SchmidtSpectrum& lambda);

}  // namespace densecode
