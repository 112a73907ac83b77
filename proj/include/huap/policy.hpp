// Attribute universe, attribute lists and multi-AND-gate policies with
// wildcards. Attribute indices are 1-based in violation reports and hash
// inputs, 0-based in containers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace huap {

struct Attribute {
  std::string name;
  std::vector<std::string> values;
};

class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {}

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t attribute_count() const { return attributes_.size(); }
  std::size_t value_count(std::size_t i) const { return attributes_.at(i).values.size(); }
  // N = sum of n_i.
  std::size_t total_values() const;
  std::vector<std::uint32_t> dimensions() const;

  std::optional<std::size_t> find_attribute(std::string_view name) const;
  std::optional<std::uint32_t> find_value(std::size_t i, std::string_view value) const;
  const std::string& value(std::size_t i, std::uint32_t t) const { return attributes_.at(i).values.at(t); }

 private:
  std::vector<Attribute> attributes_;
};

// One selected value index per attribute.
struct AttributeList {
  std::vector<std::uint32_t> selections;
  bool operator==(const AttributeList&) const = default;
};

struct Clause {
  bool wildcard = false;
  std::vector<std::uint32_t> values;  // ignored when wildcard

  static Clause any() { return Clause{true, {}}; }
  static Clause of(std::vector<std::uint32_t> values) { return Clause{false, std::move(values)}; }
  bool contains(std::uint32_t t) const;
  bool operator==(const Clause&) const = default;
};

struct AndGate {
  std::vector<Clause> clauses;
  bool operator==(const AndGate&) const = default;
};

struct Policy {
  std::vector<AndGate> gates;
  bool operator==(const Policy&) const = default;
};

struct Violation {
  std::size_t gate = 0;       // 1-based gate index, 0 when not applicable
  std::size_t attribute = 0;  // 1-based attribute index, 0 when not applicable
  std::string message;
};

std::vector<Violation> validate(const Universe& universe);
std::vector<Violation> validate(const Universe& universe, const AttributeList& list);
std::vector<Violation> validate(const Universe& universe, const AndGate& gate);
std::vector<Violation> validate(const Universe& universe, const Policy& policy);

// Throws InvalidInput carrying the first violation, if any.
void require_valid(const Universe& universe, const AttributeList& list);
void require_valid(const Universe& universe, const Policy& policy);

// L |= W: every selected value lies in its clause. Throws InvalidInput when
// the two objects cover different attribute counts.
bool satisfies_gate(const AttributeList& list, const AndGate& gate);
// Lowest index j with L |= W_j.
std::optional<std::size_t> satisfies_policy(const AttributeList& list, const Policy& policy);

}  // namespace huap
