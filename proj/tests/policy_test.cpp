#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "huap/errors.hpp"
#include "huap/policy.hpp"
#include "huap/policy_json.hpp"

using namespace huap;

namespace {

Universe five_attribute_universe() {
  return Universe({{"a1", {"v11", "v12", "v13"}},
                   {"a2", {"v21", "v22", "v23", "v24"}},
                   {"a3", {"v31", "v32"}},
                   {"a4", {"v41", "v42"}},
                   {"a5", {"v51", "v52"}}});
}

Universe uniform_universe(std::size_t n, std::size_t ni) {
  std::vector<Attribute> attrs;
  for (std::size_t i = 0; i < n; ++i) {
    Attribute a{"a" + std::to_string(i), {}};
    for (std::size_t t = 0; t < ni; ++t) a.values.push_back("v" + std::to_string(t));
    attrs.push_back(a);
  }
  return Universe(attrs);
}

// Every clause over ni values: wildcard plus each nonempty subset.
std::vector<Clause> all_clauses(std::size_t ni) {
  std::vector<Clause> out{Clause::any()};
  for (unsigned mask = 1; mask < (1u << ni); ++mask) {
    std::vector<std::uint32_t> values;
    for (std::uint32_t t = 0; t < ni; ++t) {
      if (mask & (1u << t)) values.push_back(t);
    }
    out.push_back(Clause::of(values));
  }
  return out;
}

void for_each_tuple(std::size_t n, std::size_t base, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    f(idx);
    std::size_t i = 0;
    while (i < n && ++idx[i] == base) idx[i++] = 0;
    if (i == n) return;
  }
}

// Independent oracle: the set of lists accepted by a gate, as the cartesian
// product of the clause value sets.
std::set<std::vector<std::uint32_t>> accepted_lists(const AndGate& gate, std::size_t ni) {
  std::set<std::vector<std::uint32_t>> out{{}};
  for (const auto& c : gate.clauses) {
    std::set<std::uint32_t> allowed;
    if (c.wildcard) {
      for (std::uint32_t t = 0; t < ni; ++t) allowed.insert(t);
    } else {
      allowed.insert(c.values.begin(), c.values.end());
    }
    std::set<std::vector<std::uint32_t>> next;
    for (const auto& prefix : out) {
      for (auto t : allowed) {
        auto v = prefix;
        v.push_back(t);
        next.insert(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST(Policy, WorkedExampleFirstGateSatisfied) {
  Universe u = five_attribute_universe();
  AttributeList l{{0, 1, 0, 0, 0}};  // v11, v22, v31, v41, v51
  AndGate w1{{Clause::of({0, 2}), Clause::of({0, 1}), Clause::any(), Clause::any(), Clause::any()}};
  AndGate w2{{Clause::any(), Clause::of({3}), Clause::of({1}), Clause::any(), Clause::any()}};
  Policy p{{w1, w2}};
  EXPECT_TRUE(validate(u, p).empty());
  EXPECT_TRUE(satisfies_gate(l, w1));
  EXPECT_FALSE(satisfies_gate(l, w2));
  EXPECT_EQ(satisfies_policy(l, p), std::optional<std::size_t>(0));
}

TEST(Policy, WorkedExampleSecondListRejected) {
  AttributeList l2{{0, 0, 1, 0, 0}};  // second attribute is v21
  AndGate w2{{Clause::any(), Clause::of({3}), Clause::of({1}), Clause::any(), Clause::any()}};
  EXPECT_FALSE(satisfies_gate(l2, w2));
  AttributeList l3{{0, 3, 1, 0, 0}};
  EXPECT_TRUE(satisfies_gate(l3, w2));
}

TEST(Policy, ValidationReportsAttributeIndex) {
  Universe u = five_attribute_universe();
  AndGate bad{{Clause::any(), Clause::of({}), Clause::any(), Clause::of({5}), Clause::any()}};
  auto v = validate(u, Policy{{bad}});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].attribute, 2u);
  EXPECT_EQ(v[0].gate, 1u);
  EXPECT_EQ(v[1].attribute, 4u);

  EXPECT_FALSE(validate(u, Policy{}).empty());
  EXPECT_FALSE(validate(u, AttributeList{{0, 0, 0}}).empty());
  EXPECT_FALSE(validate(u, AttributeList{{0, 4, 0, 0, 0}}).empty());
  EXPECT_THROW(require_valid(u, Policy{{bad}}), InvalidInput);
}

TEST(Policy, UniverseValidation) {
  EXPECT_FALSE(validate(Universe{}).empty());
  EXPECT_FALSE(validate(Universe(std::vector<Attribute>{{"x", {}}})).empty());
  EXPECT_FALSE(validate(Universe({{"x", {"a", "a"}}})).empty());
  EXPECT_FALSE(validate(Universe({{"x", {"a"}}, {"x", {"b"}}})).empty());
  EXPECT_TRUE(validate(five_attribute_universe()).empty());
}

TEST(Policy, DimensionMismatchThrows) {
  AndGate g{{Clause::any(), Clause::any()}};
  EXPECT_THROW(satisfies_gate(AttributeList{{0}}, g), InvalidInput);
}

TEST(Policy, ExhaustiveSingleGateAgainstOracle) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t ni = 1; ni <= 3; ++ni) {
      auto clauses = all_clauses(ni);
      Universe u = uniform_universe(n, ni);
      for_each_tuple(n, clauses.size(), [&](const std::vector<std::size_t>& ci) {
        AndGate gate;
        for (auto c : ci) gate.clauses.push_back(clauses[c]);
        ASSERT_TRUE(validate(u, gate).empty());
        auto accepted = accepted_lists(gate, ni);
        for_each_tuple(n, ni, [&](const std::vector<std::size_t>& li) {
          AttributeList l;
          for (auto t : li) l.selections.push_back(static_cast<std::uint32_t>(t));
          ASSERT_EQ(satisfies_gate(l, gate), accepted.count(l.selections) == 1);
        });
      });
    }
  }
}

TEST(Policy, ExhaustiveTwoGatePoliciesReturnLowestIndex) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t ni = 1; ni <= 3; ++ni) {
      auto clauses = all_clauses(ni);
      std::vector<AndGate> gates;
      for_each_tuple(n, clauses.size(), [&](const std::vector<std::size_t>& ci) {
        AndGate gate;
        for (auto c : ci) gate.clauses.push_back(clauses[c]);
        gates.push_back(gate);
      });
      std::vector<std::set<std::vector<std::uint32_t>>> acc;
      for (const auto& g : gates) acc.push_back(accepted_lists(g, ni));
      for (std::size_t a = 0; a < gates.size(); ++a) {
        for (std::size_t b = 0; b < gates.size(); ++b) {
          Policy p{{gates[a], gates[b]}};
          for_each_tuple(n, ni, [&](const std::vector<std::size_t>& li) {
            AttributeList l;
            for (auto t : li) l.selections.push_back(static_cast<std::uint32_t>(t));
            std::optional<std::size_t> expected;
            if (acc[a].count(l.selections)) {
              expected = 0;
            } else if (acc[b].count(l.selections)) {
              expected = 1;
            }
            ASSERT_EQ(satisfies_policy(l, p), expected);
          });
        }
      }
    }
  }
}

TEST(Policy, SampledTwoGatePoliciesLargestShape) {
  const std::size_t n = 3, ni = 3;
  auto clauses = all_clauses(ni);
  std::uint64_t state = 12345;
  auto next = [&] { return (state = state * 6364136223846793005ULL + 1442695040888963407ULL) >> 33; };
  for (int iter = 0; iter < 4000; ++iter) {
    Policy p;
    std::vector<std::set<std::vector<std::uint32_t>>> acc;
    for (int j = 0; j < 2; ++j) {
      AndGate g;
      for (std::size_t i = 0; i < n; ++i) g.clauses.push_back(clauses[next() % clauses.size()]);
      acc.push_back(accepted_lists(g, ni));
      p.gates.push_back(g);
    }
    AttributeList l;
    for (std::size_t i = 0; i < n; ++i) l.selections.push_back(static_cast<std::uint32_t>(next() % ni));
    std::optional<std::size_t> expected;
    if (acc[0].count(l.selections)) {
      expected = 0;
    } else if (acc[1].count(l.selections)) {
      expected = 1;
    }
    ASSERT_EQ(satisfies_policy(l, p), expected);
  }
}

TEST(PolicyJson, RoundTrip) {
  Universe u = five_attribute_universe();
  auto uj = universe_to_json(u);
  Universe u2 = universe_from_json(uj);
  EXPECT_EQ(u2.dimensions(), u.dimensions());

  auto pj = parse_json_text(R"({"gates": [
      {"a1": ["v11", "v13"], "a2": ["v21", "v22"], "a3": "*", "a4": "*", "a5": "*", "expires_at": 100},
      {"a1": "*", "a2": ["v24"], "a3": ["v32"], "a4": "*", "a5": "*"}]})");
  Policy p = policy_from_json(u, pj);
  ASSERT_EQ(p.gates.size(), 2u);
  EXPECT_EQ(p.gates[0].clauses[0], Clause::of({0, 2}));
  EXPECT_TRUE(p.gates[1].clauses[0].wildcard);
  EXPECT_EQ(policy_from_json(u, policy_to_json(u, p)), p);
  auto exp = policy_expirations(pj);
  ASSERT_EQ(exp.size(), 2u);
  EXPECT_EQ(exp[0], std::optional<std::int64_t>(100));
  EXPECT_FALSE(exp[1].has_value());

  auto lj = parse_json_text(R"({"a1": "v11", "a2": "v22", "a3": "v31", "a4": "v41", "a5": "v51"})");
  AttributeList l = attribute_list_from_json(u, lj);
  EXPECT_EQ(l.selections, (std::vector<std::uint32_t>{0, 1, 0, 0, 0}));
  EXPECT_EQ(attribute_list_to_json(u, l), lj);
}

TEST(PolicyJson, PartialAndUnknownRejected) {
  Universe u = five_attribute_universe();
  EXPECT_THROW(attribute_list_from_json(u, parse_json_text(R"({"a1": "v11"})")), InvalidInput);
  EXPECT_THROW(
      attribute_list_from_json(
          u, parse_json_text(R"({"a1": "v19", "a2": "v22", "a3": "v31", "a4": "v41", "a5": "v51"})")),
      InvalidInput);
  EXPECT_THROW(policy_from_json(u, parse_json_text(R"({"gates": [{"a1": "*"}]})")), InvalidInput);
  EXPECT_THROW(policy_from_json(u, parse_json_text(R"({"gates": []})")), InvalidInput);
  EXPECT_THROW(
      policy_from_json(u, parse_json_text(R"({"gates": [{"a1": [], "a2": "*", "a3": "*", "a4": "*", "a5": "*"}]})")),
      InvalidInput);
  EXPECT_THROW(parse_json_text("{not json"), InvalidInput);
}
