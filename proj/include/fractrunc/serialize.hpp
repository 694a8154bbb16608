#pragma once

#include <json.hpp>

#include "fractrunc/field.hpp"

namespace fractrunc {

// {"schema": 1, "kind", "params", "metadata": {"N", "growth_alpha", "surfaces"}}.
// Surfaces depend on the dimension, hence N.
nlohmann::json field_to_json(const Field& u, int N);

// Rebuilds any field produced by the profiles module from its document.
// Throws DomainError for unknown kinds or malformed parameters.
FieldPtr field_from_json(const nlohmann::json& doc);

nlohmann::json surface_to_json(const Surface& s);

}  // namespace fractrunc
