// Operation benchmark: wall time plus exact group-operation counts per
// scheme operation, checked against closed-form cost formulas.
//
// Instance at grid point (n, n_i, m): n attributes with n_i values each,
// N = n * n_i, m gates whose clauses each name one value; gate j accepts
// value j mod n_i of the first attribute and value 0 elsewhere. The measured
// key satisfies gate m - 1 only. reencrypt covers one message part.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "huap/metrics.hpp"

namespace huap {

struct GridPoint {
  std::size_t n = 10;
  std::size_t ni = 10;
  std::size_t m = 1;
  bool operator==(const GridPoint&) const = default;
};

struct BenchRow {
  std::string op;
  GridPoint point;
  std::size_t trials = 0;
  double mean_us = 0;
  double stddev_us = 0;
  OpCounts counts;                  // per call; identical across trials
  std::optional<OpCounts> expected; // closed-form prediction
  bool counts_stable = true;        // every trial reported the same counts

  bool ok() const { return counts_stable && (!expected || *expected == counts); }
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
  bool ok() const;
};

inline constexpr const char* kBenchOps[] = {"offline_encrypt", "online_encrypt", "anon_encrypt",
                                            "reencrypt",       "match",          "decrypt"};
inline constexpr const char* kBenchCsvHeader = "op,n,ni,m,trials,mean_us,stddev_us,EG,EGT,MG,MGT,P,RG";

// Expected per-call counts for `op` at `point`; nullopt for unknown ops.
std::optional<OpCounts> expected_counts(const std::string& op, const GridPoint& point);

// Default grid: n in {10, 20, 30, 40, 50}, n_i = 10, m = 1.
std::vector<GridPoint> default_grid();

// Runs every op at every grid point. Throws InvalidInput on an empty grid,
// zero trials or a degenerate point (n < 2, n_i < 1, m < 1).
BenchReport bench_run(const std::vector<GridPoint>& grid, std::size_t trials, std::uint64_t seed,
                      const std::vector<std::string>& ops = {std::begin(kBenchOps), std::end(kBenchOps)});

std::string to_csv(const BenchReport& report);
nlohmann::json to_json(const BenchReport& report);

}  // namespace huap
