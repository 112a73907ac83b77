#include "huap/policy_json.hpp"

#include "huap/errors.hpp"

namespace huap {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

const std::string& require_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw InvalidInput(what + " must be a string");
  return j.get_ref<const std::string&>();
}

std::uint32_t value_index(const Universe& u, std::size_t i, const json& v) {
  const std::string& name = require_string(v, "value of '" + u.attributes()[i].name + "'");
  auto t = u.find_value(i, name);
  if (!t) throw InvalidInput("attribute " + std::to_string(i + 1) + ": unknown value '" + name + "'");
  return *t;
}

// Checks that an object keyed by attribute name covers exactly the universe.
void check_coverage(const Universe& u, const json& j, const std::string& what) {
  if (!j.is_object()) throw InvalidInput(what + " must be an object keyed by attribute name");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!u.find_attribute(it.key())) throw InvalidInput(what + ": unknown attribute '" + it.key() + "'");
  }
  for (std::size_t i = 0; i < u.attribute_count(); ++i) {
    if (!j.contains(u.attributes()[i].name)) {
      throw InvalidInput(what + ": attribute " + std::to_string(i + 1) + " ('" + u.attributes()[i].name +
                         "') is missing");
    }
  }
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

Universe universe_from_json(const json& j) {
  const json& attrs = require_field(j, "attributes");
  if (!attrs.is_array()) throw InvalidInput("'attributes' must be an array");
  std::vector<Attribute> out;
  for (const auto& a : attrs) {
    Attribute attr;
    attr.name = require_string(require_field(a, "name"), "attribute name");
    const json& values = require_field(a, "values");
    if (!values.is_array()) throw InvalidInput("'values' must be an array");
    for (const auto& v : values) attr.values.push_back(require_string(v, "attribute value"));
    out.push_back(std::move(attr));
  }
  Universe u(std::move(out));
  auto violations = validate(u);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw InvalidInput("attribute " + std::to_string(v.attribute) + ": " + v.message);
  }
  return u;
}

json universe_to_json(const Universe& universe) {
  json attrs = json::array();
  for (const auto& a : universe.attributes()) attrs.push_back({{"name", a.name}, {"values", a.values}});
  return {{"attributes", attrs}};
}

AttributeList attribute_list_from_json(const Universe& universe, const json& j) {
  check_coverage(universe, j, "attribute list");
  AttributeList list;
  for (std::size_t i = 0; i < universe.attribute_count(); ++i) {
    list.selections.push_back(value_index(universe, i, j.at(universe.attributes()[i].name)));
  }
  return list;
}

json attribute_list_to_json(const Universe& universe, const AttributeList& list) {
  require_valid(universe, list);
  json j = json::object();
  for (std::size_t i = 0; i < list.selections.size(); ++i) {
    j[universe.attributes()[i].name] = universe.value(i, list.selections[i]);
  }
  return j;
}

Policy policy_from_json(const Universe& universe, const json& j) {
  const json& gates = require_field(j, "gates");
  if (!gates.is_array()) throw InvalidInput("'gates' must be an array");
  Policy policy;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    json clauses = gates[g];
    if (clauses.is_object()) clauses.erase("expires_at");
    const std::string what = "gate " + std::to_string(g + 1);
    check_coverage(universe, clauses, what);
    AndGate gate;
    for (std::size_t i = 0; i < universe.attribute_count(); ++i) {
      const json& c = clauses.at(universe.attributes()[i].name);
      if (c.is_string() && c.get_ref<const std::string&>() == "*") {
        gate.clauses.push_back(Clause::any());
      } else if (c.is_array()) {
        std::vector<std::uint32_t> values;
        for (const auto& v : c) values.push_back(value_index(universe, i, v));
        gate.clauses.push_back(Clause::of(std::move(values)));
      } else {
        throw InvalidInput(what + ": attribute " + std::to_string(i + 1) + " clause must be \"*\" or an array");
      }
    }
    policy.gates.push_back(std::move(gate));
  }
  require_valid(universe, policy);
  return policy;
}

json policy_to_json(const Universe& universe, const Policy& policy) {
  require_valid(universe, policy);
  json gates = json::array();
  for (const auto& gate : policy.gates) {
    json g = json::object();
    for (std::size_t i = 0; i < gate.clauses.size(); ++i) {
      const Clause& c = gate.clauses[i];
      if (c.wildcard) {
        g[universe.attributes()[i].name] = "*";
      } else {
        json values = json::array();
        for (auto t : c.values) values.push_back(universe.value(i, t));
        g[universe.attributes()[i].name] = values;
      }
    }
    gates.push_back(std::move(g));
  }
  return {{"gates", gates}};
}

std::vector<std::optional<std::int64_t>> policy_expirations(const json& j) {
  const json& gates = require_field(j, "gates");
  std::vector<std::optional<std::int64_t>> out;
  for (const auto& g : gates) {
    if (g.is_object() && g.contains("expires_at")) {
      if (!g.at("expires_at").is_number_integer()) throw InvalidInput("'expires_at' must be an integer");
      out.push_back(g.at("expires_at").get<std::int64_t>());
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace huap
