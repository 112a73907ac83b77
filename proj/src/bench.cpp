#include "huap/bench.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "huap/errors.hpp"
#include "huap/rng.hpp"
#include "huap/scheme.hpp"

namespace huap {

namespace {

Universe bench_universe(const GridPoint& p) {
  std::vector<Attribute> attrs;
  for (std::size_t i = 0; i < p.n; ++i) {
    Attribute a{"a" + std::to_string(i), {}};
    for (std::size_t t = 0; t < p.ni; ++t) a.values.push_back("v" + std::to_string(t));
    attrs.push_back(std::move(a));
  }
  return Universe(std::move(attrs));
}

Policy bench_policy(const GridPoint& p) {
  Policy policy;
  for (std::size_t j = 0; j < p.m; ++j) {
    AndGate gate;
    gate.clauses.push_back(Clause::of({static_cast<std::uint32_t>(j % p.ni)}));
    for (std::size_t i = 1; i < p.n; ++i) gate.clauses.push_back(Clause::of({0}));
    policy.gates.push_back(std::move(gate));
  }
  return policy;
}

AttributeList bench_list(const GridPoint& p) {
  AttributeList list;
  list.selections.assign(p.n, 0);
  list.selections[0] = static_cast<std::uint32_t>((p.m - 1) % p.ni);
  return list;
}

void check_point(const GridPoint& p) {
  if (p.n < 2 || p.ni < 1 || p.m < 1 || p.m > p.ni) {
    throw InvalidInput("bench grid point needs n >= 2, n_i >= 1 and 1 <= m <= n_i");
  }
}

struct Sample {
  double us;
  OpCounts counts;
};

// Runs `prepare` untimed and uncounted, then times and counts `body`.
template <class Prepare, class Body>
Sample measure_once(Prepare&& prepare, Body&& body) {
  prepare();
  CountScope scope;
  const auto start = std::chrono::steady_clock::now();
  body();
  const auto stop = std::chrono::steady_clock::now();
  return {std::chrono::duration<double, std::micro>(stop - start).count(), scope.delta()};
}

}  // namespace

bool BenchReport::ok() const {
  for (const auto& r : rows) {
    if (!r.ok()) return false;
  }
  return true;
}

std::optional<OpCounts> expected_counts(const std::string& op, const GridPoint& p) {
  const std::uint64_t n = p.n, m = p.m, total = p.n * p.ni;
  if (op == "offline_encrypt") return OpCounts{2, 1, 0, 0, 0, 0};
  if (op == "online_encrypt") return OpCounts{0, 0, 0, 1, 0, 0};
  if (op == "anon_encrypt") {
    // Per gate: five share families of n - 1 random elements whose running
    // products cost n - 2 multiplications each; five powers per clause value.
    return OpCounts{m * (5 * n + 5), 3 * m, m * (1 + 5 * (n - 2) + 5 * n), 0, 0,
                    m * (5 * (n - 1) + 5 * (total - n))};
  }
  if (op == "reencrypt") return OpCounts{3 + m * (2 * total + 3), 1 + 2 * m, 3 + 2 * m, 1 + m, 0, 0};
  if (op == "match") return OpCounts{0, 0, 2 * n - 1, 1, 2, 0};
  if (op == "decrypt") return OpCounts{0, 0, 6 * (n - 1) + 2, 9, 10, 0};
  return std::nullopt;
}

std::vector<GridPoint> default_grid() {
  std::vector<GridPoint> grid;
  for (std::size_t n : {10, 20, 30, 40, 50}) grid.push_back({n, 10, 1});
  return grid;
}

BenchReport bench_run(const std::vector<GridPoint>& grid, std::size_t trials, std::uint64_t seed,
                      const std::vector<std::string>& ops) {
  if (grid.empty()) throw InvalidInput("empty bench grid");
  if (trials == 0) throw InvalidInput("bench needs at least one trial");
  for (const auto& op : ops) {
    if (!expected_counts(op, GridPoint{})) throw InvalidInput("unknown bench operation '" + op + "'");
  }
  for (const auto& p : grid) check_point(p);

  BenchReport report;
  report.seed = seed;
  Rng rng(seed, "bench");
  const SystemKeys sys = system_setup(rng);
  const OwnerParams owner = owner_param_setup(sys.pk, rng);
  const ReencKey rk = reenc_keygen(rng);
  const GroupElem dk0 = derive_dk(owner.pp, owner.sp, epoch_secret(rk, 0));

  for (const auto& p : grid) {
    const Universe universe = bench_universe(p);
    const Policy policy = bench_policy(p);
    const AttrSecretKey key = attr_keygen(sys.pk, sys.mk, universe, bench_list(p), rng);
    const PolicyCiphertext pct = anon_encrypt(sys.pk, dk0, universe, policy, rng);  // also warms tables
    const TargetElem message = random_target_elem(rng);
    OfflineCiphertext warm = offline_encrypt(sys.pk, owner.pp, rng);
    const CloudCiphertext cloud{pct.dims, {online_encrypt(message, warm)}, pct.gates};
    const UserCiphertext uct = reencrypt(sys.pk, owner.pp, rk, 1, cloud, rng);

    for (const auto& op : ops) {
      std::vector<Sample> samples;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        OfflineCiphertext off;
        if (op == "offline_encrypt") {
          samples.push_back(measure_once([] {}, [&] { off = offline_encrypt(sys.pk, owner.pp, rng); }));
        } else if (op == "online_encrypt") {
          samples.push_back(measure_once([&] { off = offline_encrypt(sys.pk, owner.pp, rng); },
                                         [&] { (void)online_encrypt(message, off); }));
        } else if (op == "anon_encrypt") {
          samples.push_back(measure_once([] {}, [&] { (void)anon_encrypt(sys.pk, dk0, universe, policy, rng); }));
        } else if (op == "reencrypt") {
          samples.push_back(measure_once([] {}, [&] { (void)reencrypt(sys.pk, owner.pp, rk, 1, cloud, rng); }));
        } else if (op == "match") {
          bool matched = false;
          samples.push_back(measure_once([] {}, [&] { matched = match_gate(key, uct.dims, uct.gates.back().gate); }));
          if (!matched) throw std::logic_error("bench key failed to match its gate");
        } else if (op == "decrypt") {
          TargetElem got;
          samples.push_back(measure_once([] {}, [&] {
            const GroupElem dk = decrypt_gate(key, uct.dims, uct.gates.back());
            got = decrypt_message(owner.pp, uct.messages[0], dk);
          }));
          if (!(got == message)) throw std::logic_error("bench decryption did not recover the message");
        }
      }

      BenchRow row;
      row.op = op;
      row.point = p;
      row.trials = trials;
      row.counts = samples.front().counts;
      row.expected = expected_counts(op, p);
      double sum = 0;
      for (const auto& s : samples) {
        sum += s.us;
        if (!(s.counts == row.counts)) row.counts_stable = false;
      }
      row.mean_us = sum / static_cast<double>(trials);
      double sq = 0;
      for (const auto& s : samples) sq += (s.us - row.mean_us) * (s.us - row.mean_us);
      row.stddev_us = trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1)) : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << kBenchCsvHeader << "\n" << std::fixed << std::setprecision(1);
  for (const auto& r : report.rows) {
    const OpCounts& c = r.counts;
    out << r.op << ',' << r.point.n << ',' << r.point.ni << ',' << r.point.m << ',' << r.trials << ',' << r.mean_us
        << ',' << r.stddev_us << ',' << c.exp_g << ',' << c.exp_gt << ',' << c.mul_g << ',' << c.mul_gt << ','
        << c.pairings << ',' << c.rand_g << "\n";
  }
  return out.str();
}

nlohmann::json to_json(const BenchReport& report) {
  auto counts_json = [](const OpCounts& c) {
    return nlohmann::json{{"EG", c.exp_g},     {"EGT", c.exp_gt}, {"MG", c.mul_g},
                          {"MGT", c.mul_gt},   {"P", c.pairings}, {"RG", c.rand_g}};
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row{{"op", r.op},           {"n", r.point.n},           {"ni", r.point.ni},
                       {"m", r.point.m},       {"trials", r.trials},       {"mean_us", r.mean_us},
                       {"stddev_us", r.stddev_us}, {"counts", counts_json(r.counts)}, {"ok", r.ok()}};
    if (r.expected) row["expected"] = counts_json(*r.expected);
    rows.push_back(std::move(row));
  }
  return {{"seed", report.seed}, {"ok", report.ok()}, {"rows", std::move(rows)}};
}

}  // namespace huap
