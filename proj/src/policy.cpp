#include "huap/policy.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "huap/errors.hpp"

namespace huap {

std::size_t Universe::total_values() const {
  return std::accumulate(attributes_.begin(), attributes_.end(), std::size_t{0},
                         [](std::size_t acc, const Attribute& a) { return acc + a.values.size(); });
}

std::vector<std::uint32_t> Universe::dimensions() const {
  std::vector<std::uint32_t> dims;
  dims.reserve(attributes_.size());
  for (const auto& a : attributes_) dims.push_back(static_cast<std::uint32_t>(a.values.size()));
  return dims;
}

std::optional<std::size_t> Universe::find_attribute(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> Universe::find_value(std::size_t i, std::string_view value) const {
  const auto& values = attributes_.at(i).values;
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t] == value) return static_cast<std::uint32_t>(t);
  }
  return std::nullopt;
}

bool Clause::contains(std::uint32_t t) const {
  return wildcard || std::find(values.begin(), values.end(), t) != values.end();
}

std::vector<Violation> validate(const Universe& universe) {
  std::vector<Violation> out;
  if (universe.attribute_count() == 0) out.push_back({0, 0, "universe has no attributes"});
  std::set<std::string> names;
  for (std::size_t i = 0; i < universe.attribute_count(); ++i) {
    const auto& attr = universe.attributes()[i];
    if (!names.insert(attr.name).second) out.push_back({0, i + 1, "duplicate attribute name '" + attr.name + "'"});
    if (attr.values.empty()) out.push_back({0, i + 1, "attribute has no values"});
    std::set<std::string> seen;
    for (const auto& v : attr.values) {
      if (!seen.insert(v).second) out.push_back({0, i + 1, "duplicate value '" + v + "'"});
    }
  }
  return out;
}

std::vector<Violation> validate(const Universe& universe, const AttributeList& list) {
  std::vector<Violation> out;
  if (list.selections.size() != universe.attribute_count()) {
    out.push_back({0, 0,
                   "attribute list covers " + std::to_string(list.selections.size()) + " attributes, universe has " +
                       std::to_string(universe.attribute_count())});
    return out;
  }
  for (std::size_t i = 0; i < list.selections.size(); ++i) {
    if (list.selections[i] >= universe.value_count(i)) {
      out.push_back({0, i + 1, "value index " + std::to_string(list.selections[i] + 1) + " out of range"});
    }
  }
  return out;
}

namespace {

void validate_gate(const Universe& universe, const AndGate& gate, std::size_t gate_index,
                   std::vector<Violation>& out) {
  if (gate.clauses.size() != universe.attribute_count()) {
    out.push_back({gate_index, 0,
                   "gate covers " + std::to_string(gate.clauses.size()) + " attributes, universe has " +
                       std::to_string(universe.attribute_count())});
    return;
  }
  for (std::size_t i = 0; i < gate.clauses.size(); ++i) {
    const Clause& c = gate.clauses[i];
    if (c.wildcard) continue;
    if (c.values.empty()) {
      out.push_back({gate_index, i + 1, "empty value subset"});
      continue;
    }
    std::set<std::uint32_t> seen;
    for (auto t : c.values) {
      if (t >= universe.value_count(i)) {
        out.push_back({gate_index, i + 1, "value index " + std::to_string(t + 1) + " out of range"});
      } else if (!seen.insert(t).second) {
        out.push_back({gate_index, i + 1, "duplicate value index " + std::to_string(t + 1)});
      }
    }
  }
}

[[noreturn]] void throw_violation(const Violation& v) {
  std::string where;
  if (v.gate != 0) where += "gate " + std::to_string(v.gate) + ": ";
  if (v.attribute != 0) where += "attribute " + std::to_string(v.attribute) + ": ";
  throw InvalidInput(where + v.message);
}

}  // namespace

std::vector<Violation> validate(const Universe& universe, const AndGate& gate) {
  std::vector<Violation> out;
  validate_gate(universe, gate, 0, out);
  return out;
}

std::vector<Violation> validate(const Universe& universe, const Policy& policy) {
  std::vector<Violation> out;
  if (policy.gates.empty()) out.push_back({0, 0, "policy has no gates"});
  for (std::size_t j = 0; j < policy.gates.size(); ++j) validate_gate(universe, policy.gates[j], j + 1, out);
  return out;
}

void require_valid(const Universe& universe, const AttributeList& list) {
  auto u = validate(universe);
  if (!u.empty()) throw_violation(u.front());
  auto v = validate(universe, list);
  if (!v.empty()) throw_violation(v.front());
}

void require_valid(const Universe& universe, const Policy& policy) {
  auto u = validate(universe);
  if (!u.empty()) throw_violation(u.front());
  auto v = validate(universe, policy);
  if (!v.empty()) throw_violation(v.front());
}

bool satisfies_gate(const AttributeList& list, const AndGate& gate) {
  if (list.selections.size() != gate.clauses.size()) {
    throw InvalidInput("attribute list and gate cover different universes");
  }
  for (std::size_t i = 0; i < list.selections.size(); ++i) {
    if (!gate.clauses[i].contains(list.selections[i])) return false;
  }
  return true;
}

std::optional<std::size_t> satisfies_policy(const AttributeList& list, const Policy& policy) {
  for (std::size_t j = 0; j < policy.gates.size(); ++j) {
    if (satisfies_gate(list, policy.gates[j])) return j;
  }
  return std::nullopt;
}

}  // namespace huap
