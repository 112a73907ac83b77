// Randomized round trips for every envelope type, plus closed-form size checks.
// Elements are drawn from a small pre-generated pool; decoding still validates
// every element it reads.

#include <gtest/gtest.h>

#include <functional>

#include "huap/lifecycle.hpp"
#include "huap/rng.hpp"
#include "huap/wire.hpp"

using namespace huap;

namespace {

constexpr std::size_t kObjectsPerType = 1000;
constexpr std::size_t kHeader = 6;
constexpr std::size_t kG = kGroupElemBytes, kGT = kTargetElemBytes, kZ = kScalarBytes;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed, "wire-property") {
    for (int k = 0; k < 48; ++k) groups_.push_back(random_group_elem(rng_));
    groups_.push_back(GroupElem::identity());
    for (int k = 0; k < 16; ++k) targets_.push_back(random_target_elem(rng_));
    targets_.push_back(TargetElem::identity());
  }

  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(rng_.uniform(bound)); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  GroupElem g() { return groups_[below(groups_.size())]; }
  TargetElem gt() { return targets_[below(targets_.size())]; }
  Scalar z() { return random_scalar(rng_); }
  std::uint64_t u64() { return rng_.next_u64(); }

  Dimensions dims() {
    Dimensions d;
    const std::size_t n = between(1, 2);
    for (std::size_t i = 0; i < n; ++i) d.values_per_attribute.push_back(static_cast<std::uint32_t>(between(1, 2)));
    return d;
  }

  MessageCiphertext message() { return {g(), g(), gt()}; }

  std::vector<MessageCiphertext> messages(std::size_t max) {
    std::vector<MessageCiphertext> out(below(max + 1));
    for (auto& m : out) m = message();
    return out;
  }

  GatePair gate(const Dimensions& d) {
    GatePair p;
    p.gate = {g(), gt(), g(), g(), g(), {}};
    p.blind = {gt(), g(), g(), {}};
    for (std::size_t k = 0; k < d.total(); ++k) {
      p.gate.entries.push_back({g(), g(), g()});
      p.blind.entries.push_back({g(), g()});
    }
    return p;
  }

  std::vector<GatePair> gates(const Dimensions& d, std::size_t lo, std::size_t hi) {
    std::vector<GatePair> out(between(lo, hi));
    for (auto& p : out) p = gate(d);
    return out;
  }

  AttrSecretKey attr_key() {
    AttrSecretKey k;
    const std::size_t n = between(1, 3);
    for (std::size_t i = 0; i < n; ++i) {
      k.list.selections.push_back(static_cast<std::uint32_t>(below(4)));
      k.components.push_back({g(), g(), g()});
    }
    k.d0 = g();
    k.d0_hat = g();
    k.delta0 = g();
    k.delta0_hat = g();
    return k;
  }

  StoredObject stored() {
    StoredObject s;
    s.object_id = "obj-" + std::to_string(u64() % 100000);
    s.epoch = u64() % 1000;
    s.next_gate_id = static_cast<std::uint32_t>(between(1, 50));
    const bool has_policy = below(4) != 0;
    if (has_policy) s.cloud.dims = dims();
    s.cloud.messages = messages(2);
    for (std::size_t k = 0; k < s.cloud.messages.size(); ++k) {
      Bytes payload(below(40));
      for (auto& b : payload) b = static_cast<std::uint8_t>(u64());
      s.payloads.push_back(std::move(payload));
    }
    if (has_policy) {
      s.cloud.gates = gates(s.cloud.dims, 0, 2);
      for (std::size_t j = 0; j < s.cloud.gates.size(); ++j) {
        GateRecord rec{static_cast<std::uint32_t>(j + 1), std::nullopt};
        if (below(2)) rec.expires_at = static_cast<std::int64_t>(u64() % 2000) - 1000;
        s.gate_records.push_back(rec);
      }
      if (below(2)) s.published = UserCiphertext{s.epoch, s.cloud.dims, messages(1), gates(s.cloud.dims, 0, 1)};
    }
    return s;
  }

 private:
  Rng rng_;
  std::vector<GroupElem> groups_;
  std::vector<TargetElem> targets_;
};

template <class T, class Make>
void round_trip_many(Gen& gen, Make make) {
  for (std::size_t k = 0; k < kObjectsPerType; ++k) {
    const T v = make(gen);
    const Bytes bytes = encode(v);
    const T back = decode<T>(bytes);
    ASSERT_EQ(back, v) << "object " << k;
    ASSERT_EQ(encode(back), bytes) << "object " << k;
  }
}

std::size_t dims_bytes(const Dimensions& d) { return 4 + 4 * d.attributes(); }
std::size_t gate_bytes(std::size_t total) { return kG * (6 + 5 * total) + 2 * kGT; }
std::size_t message_bytes() { return 2 * kG + kGT; }

}  // namespace

TEST(WireProperty, KeysRoundTrip) {
  Gen gen(1);
  round_trip_many<SystemPublicKey>(gen, [](Gen& r) { return SystemPublicKey{r.g(), r.g(), r.g(), r.g(), r.g(), r.gt()}; });
  round_trip_many<SystemMasterKey>(gen, [](Gen& r) { return SystemMasterKey{r.z()}; });
  round_trip_many<DataPublicParams>(gen, [](Gen& r) { return DataPublicParams{r.g(), r.gt(), r.g()}; });
  round_trip_many<DataSecretParams>(gen, [](Gen& r) { return DataSecretParams{r.z(), r.z(), r.z(), r.g()}; });
  round_trip_many<ReencKey>(gen, [](Gen& r) { return ReencKey{r.z()}; });
  round_trip_many<AttrSecretKey>(gen, [](Gen& r) { return r.attr_key(); });
  round_trip_many<DataDecryptionKey>(gen, [](Gen& r) { return DataDecryptionKey{r.g(), r.u64()}; });
}

TEST(WireProperty, CiphertextsRoundTrip) {
  Gen gen(2);
  round_trip_many<OfflineCiphertext>(gen, [](Gen& r) { return OfflineCiphertext{r.g(), r.g(), r.gt(), r.below(2) == 1}; });
  round_trip_many<MessageCiphertext>(gen, [](Gen& r) { return r.message(); });
  round_trip_many<PolicyCiphertext>(gen, [](Gen& r) {
    PolicyCiphertext v{r.dims(), {}};
    v.gates = r.gates(v.dims, 1, 2);
    return v;
  });
  round_trip_many<CloudCiphertext>(gen, [](Gen& r) {
    CloudCiphertext v{r.dims(), {}, {}};
    v.messages = r.messages(2);
    v.gates = r.gates(v.dims, 1, 2);
    return v;
  });
  round_trip_many<UserCiphertext>(gen, [](Gen& r) {
    UserCiphertext v{r.u64(), r.dims(), {}, {}};
    v.messages = r.messages(2);
    v.gates = r.gates(v.dims, 0, 2);
    return v;
  });
}

TEST(WireProperty, GatePairsAndStoredObjectsRoundTrip) {
  Gen gen(3);
  for (std::size_t k = 0; k < kObjectsPerType; ++k) {
    const Dimensions d = gen.dims();
    const GatePair v = gen.gate(d);
    const Bytes bytes = encode(v, d);
    Dimensions got_dims;
    ASSERT_EQ(decode_gate_pair(bytes, got_dims), v) << "gate " << k;
    ASSERT_EQ(got_dims, d);
  }
  for (std::size_t k = 0; k < kObjectsPerType; ++k) {
    const StoredObject v = gen.stored();
    const Bytes bytes = encode(v);
    ASSERT_EQ(decode_stored_object(bytes), v) << "stored object " << k;
  }
}

TEST(WireProperty, SizeFormulasOverGrid) {
  Gen gen(4);
  for (std::size_t n : {1, 2, 3, 5}) {
    for (std::size_t ni : {1, 2, 4}) {
      for (std::size_t m : {1, 3}) {
        Dimensions d;
        d.values_per_attribute.assign(n, static_cast<std::uint32_t>(ni));
        const std::size_t total = n * ni;
        std::vector<GatePair> gates;
        for (std::size_t j = 0; j < m; ++j) gates.push_back(gen.gate(d));
        const std::size_t k = (n + m) % 3;
        std::vector<MessageCiphertext> messages;
        for (std::size_t t = 0; t < k; ++t) messages.push_back(gen.message());

        const PolicyCiphertext pct{d, gates};
        const ElementCount pc = measure(pct);
        EXPECT_EQ(pc.group, m * (6 + 5 * total));
        EXPECT_EQ(pc.target, 2 * m);
        EXPECT_EQ(pc.bytes, kHeader + dims_bytes(d) + 4 + m * gate_bytes(total));

        const CloudCiphertext cct{d, messages, gates};
        const ElementCount cc = measure(cct);
        EXPECT_EQ(cc.group, m * (6 + 5 * total) + 2 * k);
        EXPECT_EQ(cc.target, 2 * m + k);
        EXPECT_EQ(cc.bytes, kHeader + dims_bytes(d) + 4 + k * message_bytes() + 4 + m * gate_bytes(total));

        const UserCiphertext uct{7, d, messages, gates};
        EXPECT_EQ(measure(uct).bytes, cc.bytes + 8);

        AttrSecretKey key;
        key.list.selections.assign(n, 0);
        key.components.assign(n, {gen.g(), gen.g(), gen.g()});
        const ElementCount kc = measure(key);
        EXPECT_EQ(kc.group, 4 + 3 * n);
        EXPECT_EQ(kc.bytes, kHeader + 4 + 4 * n + kG * (4 + 3 * n));
      }
    }
  }
  const ElementCount pk = measure(SystemPublicKey{gen.g(), gen.g(), gen.g(), gen.g(), gen.g(), gen.gt()});
  EXPECT_EQ(pk.bytes, kHeader + 5 * kG + kGT);
  EXPECT_EQ(measure(DataPublicParams{gen.g(), gen.gt(), gen.g()}).bytes, kHeader + 2 * kG + kGT);
  EXPECT_EQ(measure(gen.message()).bytes, kHeader + message_bytes());
  EXPECT_EQ(encode(ReencKey{gen.z()}).size(), kHeader + kZ);
  EXPECT_EQ(encode(DataDecryptionKey{gen.g(), 3}).size(), kHeader + 8 + kG);
}
