// Plain-logic access oracle, kept separate from the library's evaluator.

#pragma once

#include <cstdint>
#include <vector>

#include "huap/policy.hpp"
#include "huap/rng.hpp"

namespace oracle {

inline bool gate_admits(const huap::AndGate& gate, const std::vector<std::uint32_t>& selections) {
  if (gate.clauses.size() != selections.size()) return false;
  for (std::size_t i = 0; i < selections.size(); ++i) {
    const huap::Clause& c = gate.clauses[i];
    if (c.wildcard) continue;
    bool hit = false;
    for (auto v : c.values) hit = hit || v == selections[i];
    if (!hit) return false;
  }
  return true;
}

inline bool admits(const std::vector<huap::AndGate>& gates, const std::vector<std::uint32_t>& selections) {
  for (const auto& g : gates) {
    if (gate_admits(g, selections)) return true;
  }
  return false;
}

// Every attribute list of the universe, in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> all_lists(const std::vector<std::uint32_t>& dims) {
  std::vector<std::vector<std::uint32_t>> out{{}};
  for (auto ni : dims) {
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& prefix : out) {
      for (std::uint32_t t = 0; t < ni; ++t) {
        auto l = prefix;
        l.push_back(t);
        next.push_back(std::move(l));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Random gate: each clause is a wildcard or a non-empty random value subset.
inline huap::AndGate random_gate(const std::vector<std::uint32_t>& dims, huap::Rng& rng) {
  huap::AndGate g;
  for (auto ni : dims) {
    if (rng.uniform(3) == 0) {
      g.clauses.push_back(huap::Clause::any());
      continue;
    }
    std::vector<std::uint32_t> values;
    for (std::uint32_t t = 0; t < ni; ++t) {
      if (rng.uniform(2) == 0) values.push_back(t);
    }
    if (values.empty()) values.push_back(static_cast<std::uint32_t>(rng.uniform(ni)));
    g.clauses.push_back(huap::Clause::of(values));
  }
  return g;
}

}  // namespace oracle
