#include <gtest/gtest.h>

#include "huap/errors.hpp"
#include "huap/metrics.hpp"
#include "huap/payload.hpp"
#include "huap/rng.hpp"
#include "huap/scheme.hpp"

using namespace huap;

namespace {

struct World {
  Rng rng{2024};
  Universe universe{std::vector<Attribute>{
      {"role", {"doctor", "nurse", "admin"}}, {"ward", {"icu", "er"}}, {"shift", {"day", "night"}}}};
  SystemKeys sys = system_setup(rng);
  OwnerParams owner = owner_param_setup(sys.pk, rng);
  ReencKey rk = reenc_keygen(rng);

  // Gate 1: doctor in icu, any shift. Gate 2: nurse or admin, er, night.
  Policy policy{{AndGate{{Clause::of({0}), Clause::of({0}), Clause::any()}},
                 AndGate{{Clause::of({1, 2}), Clause::of({1}), Clause::of({1})}}}};

  AttrSecretKey key(const AttributeList& l) { return attr_keygen(sys.pk, sys.mk, universe, l, rng); }

  CloudCiphertext object(const std::vector<TargetElem>& messages) {
    CloudCiphertext ct;
    auto pct = anon_encrypt(sys.pk, owner.pp, owner.sp, rk, universe, policy, rng);
    ct.dims = pct.dims;
    ct.gates = pct.gates;
    for (const auto& m : messages) {
      auto off = offline_encrypt(sys.pk, owner.pp, rng);
      ct.messages.push_back(online_encrypt(m, off));
    }
    return ct;
  }
};

}  // namespace

TEST(Scheme, RoundTripAcrossEpochs) {
  World w;
  const TargetElem m0 = random_target_elem(w.rng);
  const TargetElem m1 = random_target_elem(w.rng);
  const CloudCiphertext ct = w.object({m0, m1});
  const AttrSecretKey doctor = w.key({{0, 0, 1}});
  const AttrSecretKey nurse = w.key({{1, 1, 1}});

  for (std::uint64_t epoch = 1; epoch <= 3; ++epoch) {
    const UserCiphertext uct = reencrypt(w.sys.pk, w.owner.pp, w.rk, epoch, ct, w.rng);
    EXPECT_EQ(uct.epoch, epoch);
    auto d = anon_decrypt(w.owner.pp, uct, doctor, 0);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->gate, 0u);
    EXPECT_EQ(d->message, m0);
    EXPECT_EQ(d->dk.epoch, epoch);
    EXPECT_EQ(d->dk.dk, derive_dk(w.owner.pp, w.owner.sp, epoch_secret(w.rk, epoch)));

    auto d2 = anon_decrypt(w.owner.pp, uct, nurse, 1);
    ASSERT_TRUE(d2.has_value());
    EXPECT_EQ(d2->gate, 1u);
    EXPECT_EQ(d2->message, m1);
  }
}

TEST(Scheme, NonSatisfyingKeysAreRejected) {
  World w;
  const CloudCiphertext ct = w.object({random_target_elem(w.rng)});
  const UserCiphertext uct = reencrypt(w.sys.pk, w.owner.pp, w.rk, 1, ct, w.rng);
  for (const AttributeList& l : {AttributeList{{0, 1, 0}}, AttributeList{{1, 1, 0}}, AttributeList{{2, 0, 1}}}) {
    ASSERT_FALSE(satisfies_policy(l, w.policy).has_value());
    EXPECT_FALSE(anon_decrypt(w.owner.pp, uct, w.key(l)).has_value());
  }
}

TEST(Scheme, MatchAgreesWithPlaintextPredicate) {
  World w;
  const PolicyCiphertext pct = anon_encrypt(w.sys.pk, w.owner.pp, w.owner.sp, w.rk, w.universe, w.policy, w.rng);
  for (std::uint32_t a = 0; a < 3; ++a) {
    for (std::uint32_t b = 0; b < 2; ++b) {
      for (std::uint32_t c = 0; c < 2; ++c) {
        const AttributeList l{{a, b, c}};
        const AttrSecretKey k = w.key(l);
        for (std::size_t j = 0; j < w.policy.gates.size(); ++j) {
          EXPECT_EQ(match_gate(k, pct.dims, pct.gates[j].gate), satisfies_gate(l, w.policy.gates[j]));
        }
      }
    }
  }
}

TEST(Scheme, StoredFormAndStaleKeysDoNotDecrypt) {
  World w;
  const TargetElem m = random_target_elem(w.rng);
  const CloudCiphertext ct = w.object({m});
  EXPECT_THROW(reencrypt(w.sys.pk, w.owner.pp, w.rk, 0, ct, w.rng), ProtocolError);

  const GroupElem dk0 = derive_dk(w.owner.pp, w.owner.sp, epoch_secret(w.rk, 0));
  EXPECT_NE(decrypt_message(w.owner.pp, ct.messages[0], dk0), m);

  const UserCiphertext e1 = reencrypt(w.sys.pk, w.owner.pp, w.rk, 1, ct, w.rng);
  const UserCiphertext e2 = reencrypt(w.sys.pk, w.owner.pp, w.rk, 2, ct, w.rng);
  const GroupElem dk1 = derive_dk(w.owner.pp, w.owner.sp, epoch_secret(w.rk, 1));
  EXPECT_EQ(decrypt_message(w.owner.pp, e1.messages[0], dk1), m);
  EXPECT_NE(decrypt_message(w.owner.pp, e2.messages[0], dk1), m);
}

TEST(Scheme, EpochSecretsAreDistinct) {
  World w;
  EXPECT_EQ(epoch_secret(w.rk, 5), epoch_secret(w.rk, 5));
  EXPECT_NE(epoch_secret(w.rk, 0), epoch_secret(w.rk, 1));
  EXPECT_NE(epoch_secret(w.rk, 1), epoch_secret(reenc_keygen(w.rng), 1));
}

TEST(Scheme, KeySelfTest) {
  World w;
  AttrSecretKey k = w.key({{2, 1, 0}});
  EXPECT_TRUE(attr_key_self_test(w.sys.pk, w.universe, k));
  AttrSecretKey bad = k;
  bad.components[1].zero = bad.components[1].zero * w.sys.pk.g1;
  EXPECT_FALSE(attr_key_self_test(w.sys.pk, w.universe, bad));
  bad = k;
  bad.delta0_hat = bad.delta0_hat * w.sys.pk.g2;
  EXPECT_FALSE(attr_key_self_test(w.sys.pk, w.universe, bad));
  EXPECT_THROW(w.key({{3, 0, 0}}), InvalidInput);
  EXPECT_THROW(w.key({{0, 0}}), InvalidInput);
}

TEST(Scheme, OfflineCiphertextIsSingleUse) {
  World w;
  auto off = offline_encrypt(w.sys.pk, w.owner.pp, w.rng);
  const TargetElem m = random_target_elem(w.rng);
  online_encrypt(m, off);
  EXPECT_TRUE(off.consumed);
  EXPECT_THROW(online_encrypt(m, off), ProtocolError);
}

TEST(Scheme, IdentitySharesMultiplyToOne) {
  Rng rng(7);
  for (std::size_t n = 1; n <= 6; ++n) {
    auto shares = identity_shares(n, rng);
    ASSERT_EQ(shares.size(), n);
    GroupElem prod;
    for (const auto& s : shares) prod = prod * s;
    EXPECT_TRUE(prod.is_identity());
    if (n > 1) EXPECT_FALSE(shares[0].is_identity());
  }
}

TEST(Scheme, DimensionMismatchIsInvalidInput) {
  World w;
  const PolicyCiphertext pct = anon_encrypt(w.sys.pk, w.owner.pp, w.owner.sp, w.rk, w.universe, w.policy, w.rng);
  AttrSecretKey k = w.key({{0, 0, 0}});
  Dimensions other{{3, 2}};
  EXPECT_THROW(match_gate(k, other, pct.gates[0].gate), InvalidInput);
  GateCiphertext truncated = pct.gates[0].gate;
  truncated.entries.pop_back();
  EXPECT_THROW(match_gate(k, pct.dims, truncated), InvalidInput);
  EXPECT_THROW(anon_encrypt(w.sys.pk, w.owner.pp, w.owner.sp, w.rk, w.universe, Policy{}, w.rng), InvalidInput);
}

TEST(SchemeCounts, OfflineAndOnline) {
  World w;
  CountScope off_scope;
  auto off = offline_encrypt(w.sys.pk, w.owner.pp, w.rng);
  EXPECT_EQ(off_scope.delta(), (OpCounts{2, 1, 0, 0, 0, 0}));
  const TargetElem m = random_target_elem(w.rng);
  CountScope on_scope;
  online_encrypt(m, off);
  EXPECT_EQ(on_scope.delta(), (OpCounts{0, 0, 0, 1, 0, 0}));
}

TEST(SchemeCounts, MatchAndDecryptPairings) {
  World w;
  const CloudCiphertext ct = w.object({random_target_elem(w.rng)});
  const UserCiphertext uct = reencrypt(w.sys.pk, w.owner.pp, w.rk, 1, ct, w.rng);
  const AttrSecretKey nurse = w.key({{1, 1, 1}});  // matches the second gate only

  CountScope match_scope;
  EXPECT_FALSE(match_gate(nurse, uct.dims, uct.gates[0].gate));
  EXPECT_EQ(match_scope.delta().pairings, 2u);

  CountScope dec_scope;
  EXPECT_TRUE(anon_decrypt(w.owner.pp, uct, nurse).has_value());
  const OpCounts d = dec_scope.delta();
  EXPECT_EQ(d.pairings, 2u * 2u + 10u);
  EXPECT_EQ(d.exp_g, 0u);
  EXPECT_EQ(d.exp_gt, 0u);
}

TEST(SchemeCounts, GateEncryptionSingleValueClauses) {
  World w;
  const std::size_t n = w.universe.attribute_count();
  const Policy one{{AndGate{{Clause::of({0}), Clause::of({1}), Clause::of({0})}}}};
  const GroupElem dk0 = derive_dk(w.owner.pp, w.owner.sp, epoch_secret(w.rk, 0));
  CountScope scope;
  anon_encrypt(w.sys.pk, dk0, w.universe, one, w.rng);
  const OpCounts c = scope.delta();
  const std::size_t total = w.universe.total_values();
  EXPECT_EQ(c.exp_g, 5 * n + 5);
  EXPECT_EQ(c.exp_gt, 3u);
  EXPECT_EQ(c.pairings, 0u);
  EXPECT_EQ(c.rand_g, 5 * (n - 1) + 5 * (total - n));
}

TEST(Payload, SealOpenAndReject) {
  Rng rng(99);
  const TargetElem k = random_target_elem(rng);
  const std::string text = "vital signs: 72 bpm";
  const Bytes plain(text.begin(), text.end());
  const Bytes sealed = seal_payload(k, plain, rng);
  EXPECT_EQ(sealed.size(), plain.size() + kPayloadOverhead);
  EXPECT_EQ(open_payload(k, sealed), plain);
  EXPECT_THROW(open_payload(random_target_elem(rng), sealed), AuthFailure);
  Bytes tampered = sealed;
  tampered[20] ^= 1;
  EXPECT_THROW(open_payload(k, tampered), AuthFailure);
  EXPECT_THROW(open_payload(k, Bytes(5, 1)), InvalidInput);
  EXPECT_EQ(open_payload(k, seal_payload(k, {}, rng)), Bytes{});
}
