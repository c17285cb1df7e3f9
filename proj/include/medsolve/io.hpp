#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "medsolve/certificates.hpp"
#include "medsolve/solver.hpp"

namespace medsolve {

using json = nlohmann::json;

/// Complex entries are [re, im] pairs; matrices are arrays of rows.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& where);

struct EnsembleMetadata {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<int>> profile;
};

json ensemble_to_json(const Ensemble& e, const EnsembleMetadata& meta = {});

/// Parses and validates; throws MedError naming the first violated invariant.
Ensemble ensemble_from_json(const json& j);

json povm_to_json(const Povm& p);
Povm povm_from_json(const json& j, const RankProfile& profile);

json certificate_to_json(const Certificate& c);

/// nlohmann::json::parse with failures reported as ParseError.
json parse_json(const std::string& text);

json error_to_json(const MedError& e);

}  // namespace medsolve
