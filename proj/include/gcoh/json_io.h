#pragma once

#include <string>

#include <json.hpp>

#include "gcoh/channel.h"
#include "gcoh/coherence.h"
#include "gcoh/equivalence.h"
#include "gcoh/gaussian_state.h"

namespace gcoh {

// State document:   {"modes": m, "mean": [2m], "cov": [[2m x 2m], row-major]}
// Channel document: {"modes": m, "T": [[...]], "N": [[...]], "shift": [2m]}
// Malformed documents raise parse_error; well-formed but inconsistent
// dimensions raise shape_error.

nlohmann::json state_to_json(const GaussianState &state);
GaussianState state_from_json(const nlohmann::json &doc, double tol = kDefaultTol);

nlohmann::json channel_to_json(const GaussianChannel &channel);
GaussianChannel channel_from_json(const nlohmann::json &doc, double tol = kDefaultTol);

nlohmann::json coherence_to_json(const CoherenceReport &report);
nlohmann::json classification_to_json(const IgoClassification &classification);
nlohmann::json unitary_to_json(const IncoherentUnitary &u);
nlohmann::json verdict_to_json(const EquivalenceVerdict &verdict);

/// Parses text, mapping syntax errors to parse_error.
nlohmann::json parse_json(const std::string &text);

/// Serializes with every floating-point number printed as %.17g and object
/// keys in sorted order. Non-finite numbers become null.
std::string dump_json(const nlohmann::json &doc, bool pretty = false);

}  // namespace gcoh
