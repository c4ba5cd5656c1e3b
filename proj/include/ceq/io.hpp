#pragma once

#include "coarse_grain.hpp"
#include "tpm.hpp"

#include <iosfwd>
#include <string>

namespace ceq {

/// {"n": int, "rows": [[...], ...]}. A missing "n" is inferred from the row count.
TpmD tpm_from_json(std::string const &text);
std::string tpm_to_json(TpmD const &tpm, int precision = 17);

/// N lines of N comma-separated values, no header.
TpmD tpm_from_csv(std::string const &text);
std::string tpm_to_csv(TpmD const &tpm, int precision = 17);

/// Reads by extension: .json as JSON, anything else as CSV.
TpmD load_tpm(std::string const &path);
void save_tpm(std::string const &path, TpmD const &tpm, int precision = 17);

/// {"n_micro": int, "n_macro": int, "map": [...]}, or a CSV line of macro indices
/// (scales inferred from its length and largest index).
CoarseMapping mapping_from_json(std::string const &text);
CoarseMapping load_mapping(std::string const &path);
std::string mapping_to_json(CoarseMapping const &cm);

std::string read_file(std::string const &path);

} // namespace ceq
