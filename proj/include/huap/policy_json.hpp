// JSON text form of universes, attribute lists and policies.
//
//   universe: {"attributes": [{"name": "role", "values": ["doctor", "nurse"]}, ...]}
//   list:     {"role": "doctor", "ward": "icu", ...}
//   policy:   {"gates": [{"role": ["doctor"], "ward": "*"}, ...]}
//
// Lists and gates must name every attribute; "*" marks a wildcard clause.
// A gate may also carry "expires_at" (integer), read by policy_expirations.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "huap/policy.hpp"

namespace huap {

Universe universe_from_json(const nlohmann::json& j);
nlohmann::json universe_to_json(const Universe& universe);

AttributeList attribute_list_from_json(const Universe& universe, const nlohmann::json& j);
nlohmann::json attribute_list_to_json(const Universe& universe, const AttributeList& list);

Policy policy_from_json(const Universe& universe, const nlohmann::json& j);
nlohmann::json policy_to_json(const Universe& universe, const Policy& policy);
std::vector<std::optional<std::int64_t>> policy_expirations(const nlohmann::json& j);

// Parses text, mapping any JSON syntax error to InvalidInput.
nlohmann::json parse_json_text(const std::string& text);

}  // namespace huap
