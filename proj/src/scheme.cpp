#include "huap/scheme.hpp"

#include <numeric>

#include "huap/errors.hpp"
#include "huap/metrics.hpp"
#include "huap/rng.hpp"

namespace huap {

namespace {

std::uint32_t hash_index(std::size_t i) { return static_cast<std::uint32_t>(i + 1); }

GroupElem attr_hash(AttrHashTag tag, const Universe& u, std::size_t i, std::uint32_t t) {
  return hash_attribute(tag, hash_index(i), u.value(i, t));
}

void check_key_dims(const AttrSecretKey& key, const Dimensions& dims) {
  const std::size_t n = dims.attributes();
  if (key.components.size() != n || key.list.selections.size() != n) {
    throw InvalidInput("key covers " + std::to_string(key.components.size()) + " attributes, ciphertext " +
                       std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (key.list.selections[i] >= dims.values_per_attribute[i]) {
      throw InvalidInput("key value index out of range at attribute " + std::to_string(i + 1));
    }
  }
}

void check_gate_dims(const GatePair& pair, const Dimensions& dims) {
  if (pair.gate.entries.size() != dims.total() || pair.blind.entries.size() != dims.total()) {
    throw InvalidInput("gate ciphertext does not match its dimensions");
  }
}

Bytes epoch_secret_input(const ReencKey& rk, std::uint64_t epoch) {
  const auto s = rk.s.encode();
  Bytes input(s.begin(), s.end());
  for (int shift = 56; shift >= 0; shift -= 8) input.push_back(static_cast<std::uint8_t>(epoch >> shift));
  return input;
}

Scalar random_nonzero(Rng& rng) { return random_scalar(rng, true); }

}  // namespace

std::size_t Dimensions::total() const {
  return std::accumulate(values_per_attribute.begin(), values_per_attribute.end(), std::size_t{0});
}

std::size_t Dimensions::offset(std::size_t i) const {
  return std::accumulate(values_per_attribute.begin(), values_per_attribute.begin() + static_cast<std::ptrdiff_t>(i),
                         std::size_t{0});
}

// --- attribute authority -----------------------------------------------------

SystemKeys system_setup(Rng& rng) {
  SystemKeys keys;
  keys.pk.g = GroupElem::generator();
  keys.pk.g1 = random_group_elem(rng);
  keys.pk.g2 = random_group_elem(rng);
  keys.pk.g3 = random_group_elem(rng);
  keys.pk.g4 = random_group_elem(rng);
  keys.mk.y = random_nonzero(rng);
  keys.pk.y = pair(keys.pk.g1, keys.pk.g2).pow(keys.mk.y);
  return keys;
}

AttrSecretKey attr_keygen(const SystemPublicKey& pk, const SystemMasterKey& mk, const Universe& universe,
                          const AttributeList& list, Rng& rng) {
  require_valid(universe, list);
  precompute_fixed_base(pk.g1);
  precompute_fixed_base(pk.g2);
  const std::size_t n = universe.attribute_count();

  // Shares r_i of the master exponent and free shares rhat_i.
  std::vector<Scalar> shares(n), hat_shares(n);
  Scalar partial, hat_sum;
  for (std::size_t i = 0; i < n; ++i) {
    shares[i] = (i + 1 < n) ? random_scalar(rng) : mk.y - partial;
    partial = partial + shares[i];
    hat_shares[i] = random_scalar(rng);
    hat_sum = hat_sum + hat_shares[i];
  }
  const Scalar r = random_nonzero(rng);
  const Scalar lambda = random_nonzero(rng);
  const Scalar lambda_hat = random_nonzero(rng);

  AttrSecretKey key;
  key.list = list;
  key.d0 = pk.g2.pow(lambda);
  key.d0_hat = pk.g1.pow(lambda_hat);
  key.delta0 = pk.g1.pow(r);
  key.delta0_hat = pk.g2.pow(mk.y - hat_sum);
  key.components.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t t = list.selections[i];
    AttrSecretKey::Component c;
    c.delta = pk.g2.pow(hat_shares[i]) * attr_hash(AttrHashTag::kDelta, universe, i, t).pow(r);
    c.zero = pk.g1.pow(shares[i]) * attr_hash(AttrHashTag::kZero, universe, i, t).pow(lambda);
    c.zero_hat = pk.g2.pow(shares[i]) * attr_hash(AttrHashTag::kOne, universe, i, t).pow(lambda_hat);
    key.components.push_back(c);
  }
  return key;
}

bool attr_key_self_test(const SystemPublicKey& pk, const Universe& universe, const AttrSecretKey& key) {
  if (!validate(universe, key.list).empty() || key.components.size() != universe.attribute_count()) return false;
  GroupElem delta_prod = key.delta0_hat, zero_prod, zero_hat_prod;
  GroupElem h_delta, h_zero, h_one;
  for (std::size_t i = 0; i < key.components.size(); ++i) {
    const std::uint32_t t = key.list.selections[i];
    delta_prod *= key.components[i].delta;
    zero_prod *= key.components[i].zero;
    zero_hat_prod *= key.components[i].zero_hat;
    h_delta *= attr_hash(AttrHashTag::kDelta, universe, i, t);
    h_zero *= attr_hash(AttrHashTag::kZero, universe, i, t);
    h_one *= attr_hash(AttrHashTag::kOne, universe, i, t);
  }
  const bool delta_ok = pair(pk.g1, delta_prod) / pair(h_delta, key.delta0) == pk.y;
  const bool zero_ok = pair(zero_prod, pk.g2) / pair(h_zero, key.d0) == pk.y;
  const bool hat_ok = pair(zero_hat_prod, pk.g1) / pair(h_one, key.d0_hat) == pk.y;
  return delta_ok && zero_ok && hat_ok;
}

// --- data owner --------------------------------------------------------------

OwnerParams owner_param_setup(const SystemPublicKey& pk, Rng& rng) {
  OwnerParams out;
  out.sp.mk0 = random_nonzero(rng);
  out.sp.mk1 = random_nonzero(rng);
  out.sp.sk = random_nonzero(rng);
  out.sp.sk1 = pk.g4.pow(out.sp.mk0);
  out.pp.q0 = pk.g3.pow(out.sp.sk);
  out.pp.pp0 = pair(pk.g3, pk.g4).pow(out.sp.mk0);
  out.pp.pp1 = pk.g3.pow(out.sp.mk1);
  return out;
}

ReencKey reenc_keygen(Rng& rng) { return ReencKey{random_nonzero(rng)}; }

Scalar epoch_secret(const ReencKey& rk, std::uint64_t epoch) { return hash_to_scalar(epoch_secret_input(rk, epoch)); }

GroupElem derive_dk(const DataPublicParams& pp, const DataSecretParams& sp, const Scalar& epoch_secret) {
  return sp.sk1 * pp.pp1.pow(sp.sk + epoch_secret);
}

std::vector<GroupElem> identity_shares(std::size_t count, Rng& rng) {
  std::vector<GroupElem> out;
  if (count == 0) return out;
  out.reserve(count);
  GroupElem prod;
  for (std::size_t k = 0; k + 1 < count; ++k) {
    out.push_back(random_group_elem(rng));
    prod = (k == 0) ? out.back() : prod * out.back();
  }
  out.push_back(prod.inverse());
  return out;
}

namespace {

GatePair encrypt_gate(const SystemPublicKey& pk, const GroupElem& dk0, const Universe& universe, const AndGate& gate,
                      Rng& rng) {
  const Dimensions dims = Dimensions::of(universe);
  const std::size_t n = dims.attributes();

  const Scalar s1 = random_nonzero(rng);
  const Scalar s1p = random_nonzero(rng);
  const Scalar s1pp = random_nonzero(rng);
  const Scalar s2 = random_nonzero(rng);
  const Scalar s2pp = random_nonzero(rng);

  // One identity-share family per entry column; member i is reused for every
  // value of attribute i inside the clause.
  const auto sig_delta = identity_shares(n, rng);
  const auto sig_zero = identity_shares(n, rng);
  const auto sig_zero_hat = identity_shares(n, rng);
  const auto sig_blind = identity_shares(n, rng);
  const auto sig_blind_hat = identity_shares(n, rng);
  for (const auto* family : {&sig_delta, &sig_zero, &sig_zero_hat, &sig_blind, &sig_blind_hat}) {
    UncountedScope uncounted;
    GroupElem prod;
    for (const auto& x : *family) prod = prod.is_identity() ? x : prod * x;
    if (!prod.is_identity()) throw std::logic_error("identity shares do not multiply to one");
  }

  const Scalar s1_rest = s1 - s1pp;
  const Scalar s2_rest = s2 - s2pp;

  GatePair out;
  out.gate.c_tilde = dk0 * map_target_to_group(pk.y.pow(s1));
  out.gate.c_delta = pk.y.pow(s1p);
  out.gate.c0_hat = pk.g1.pow(s1p);
  out.gate.c1 = pk.g2.pow(s1pp);
  out.gate.c1_hat = pk.g1.pow(s1_rest);
  out.blind.c_tilde = pk.y.pow(s2);
  out.blind.c1 = pk.g2.pow(s2pp);
  out.blind.c1_hat = pk.g1.pow(s2_rest);
  out.gate.entries.reserve(dims.total());
  out.blind.entries.reserve(dims.total());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t t = 0; t < dims.values_per_attribute[i]; ++t) {
      if (gate.clauses[i].contains(t)) {
        const GroupElem h_delta = attr_hash(AttrHashTag::kDelta, universe, i, t);
        const GroupElem h_zero = attr_hash(AttrHashTag::kZero, universe, i, t);
        const GroupElem h_one = attr_hash(AttrHashTag::kOne, universe, i, t);
        out.gate.entries.push_back(
            {sig_delta[i] * h_delta.pow(s1p), sig_zero[i] * h_zero.pow(s1pp), sig_zero_hat[i] * h_one.pow(s1_rest)});
        out.blind.entries.push_back({sig_blind[i] * h_zero.pow(s2pp), sig_blind_hat[i] * h_one.pow(s2_rest)});
      } else {
        out.gate.entries.push_back({random_group_elem(rng), random_group_elem(rng), random_group_elem(rng)});
        out.blind.entries.push_back({random_group_elem(rng), random_group_elem(rng)});
      }
    }
  }
  return out;
}

}  // namespace

PolicyCiphertext anon_encrypt(const SystemPublicKey& pk, const GroupElem& dk0, const Universe& universe,
                              const Policy& policy, Rng& rng) {
  require_valid(universe, policy);
  precompute_fixed_base(pk.g1);
  precompute_fixed_base(pk.g2);
  PolicyCiphertext out;
  out.dims = Dimensions::of(universe);
  out.gates.reserve(policy.gates.size());
  for (const auto& gate : policy.gates) out.gates.push_back(encrypt_gate(pk, dk0, universe, gate, rng));
  return out;
}

PolicyCiphertext anon_encrypt(const SystemPublicKey& pk, const DataPublicParams& pp, const DataSecretParams& sp,
                              const ReencKey& rk, const Universe& universe, const Policy& policy, Rng& rng) {
  require_valid(universe, policy);
  return anon_encrypt(pk, derive_dk(pp, sp, epoch_secret(rk, 0)), universe, policy, rng);
}

// --- device ------------------------------------------------------------------

OfflineCiphertext offline_encrypt(const SystemPublicKey& pk, const DataPublicParams& pp, Rng& rng) {
  const Scalar rd = random_nonzero(rng);
  OfflineCiphertext out;
  out.u0 = pk.g3.pow(rd);
  out.u1 = pp.q0.pow(rd);
  out.v0 = pp.pp0.pow(rd);
  return out;
}

MessageCiphertext online_encrypt(const TargetElem& message, OfflineCiphertext& offline) {
  if (offline.consumed) throw ProtocolError("offline ciphertext already consumed");
  offline.consumed = true;
  return MessageCiphertext{offline.u0, offline.u1, message * offline.v0};
}

// --- cloud -------------------------------------------------------------------

MessageCiphertext reencrypt_message(const SystemPublicKey& pk, const DataPublicParams& pp,
                                    const Scalar& epoch_secret, const MessageCiphertext& ct, Rng& rng) {
  const Scalar r = random_nonzero(rng);
  MessageCiphertext out;
  out.u0 = ct.u0 * pk.g3.pow(r);
  out.u1 = ct.u1 * pp.q0.pow(r) * out.u0.pow(epoch_secret);
  out.v = ct.v * pp.pp0.pow(r);
  return out;
}

GatePair reencrypt_gate(const SystemPublicKey& pk, const DataPublicParams& pp, const Scalar& epoch_secret,
                        const Scalar& base_secret, const GatePair& gate, Rng& rng) {
  const Scalar rw = random_nonzero(rng);
  const Scalar rb = random_nonzero(rng);
  const TargetElem fresh = pk.y.pow(rw);
  GatePair out;
  out.gate = gate.gate;
  out.gate.c_tilde = map_target_to_group(fresh) * pp.pp1.pow(epoch_secret - base_secret) * gate.gate.c_tilde;
  out.blind.c_tilde = fresh * gate.blind.c_tilde.pow(rb);
  out.blind.c1 = gate.blind.c1.pow(rb);
  out.blind.c1_hat = gate.blind.c1_hat.pow(rb);
  out.blind.entries.reserve(gate.blind.entries.size());
  for (const auto& e : gate.blind.entries) out.blind.entries.push_back({e.zero.pow(rb), e.zero_hat.pow(rb)});
  return out;
}

UserCiphertext reencrypt(const SystemPublicKey& pk, const DataPublicParams& pp, const ReencKey& rk,
                         std::uint64_t epoch, const CloudCiphertext& ct, Rng& rng) {
  if (epoch == 0) throw ProtocolError("epoch 0 is the stored form and is never published");
  for (const auto& g : ct.gates) check_gate_dims(g, ct.dims);
  precompute_fixed_base(pk.g3);
  precompute_fixed_base(pp.q0);
  precompute_fixed_base(pp.pp1);
  const Scalar s_l = epoch_secret(rk, epoch);
  const Scalar s_0 = epoch_secret(rk, 0);
  UserCiphertext out;
  out.epoch = epoch;
  out.dims = ct.dims;
  for (const auto& m : ct.messages) out.messages.push_back(reencrypt_message(pk, pp, s_l, m, rng));
  for (const auto& g : ct.gates) out.gates.push_back(reencrypt_gate(pk, pp, s_l, s_0, g, rng));
  return out;
}

// --- data user ---------------------------------------------------------------

bool match_gate(const AttrSecretKey& key, const Dimensions& dims, const GateCiphertext& gate) {
  check_key_dims(key, dims);
  if (gate.entries.size() != dims.total()) throw InvalidInput("gate ciphertext does not match its dimensions");
  GroupElem key_prod = key.delta0_hat;
  GroupElem ct_prod;
  for (std::size_t i = 0; i < dims.attributes(); ++i) {
    key_prod *= key.components[i].delta;
    const auto& entry = gate.entries[dims.offset(i) + key.list.selections[i]].delta;
    ct_prod = (i == 0) ? entry : ct_prod * entry;
  }
  return gate.c_delta == pair(gate.c0_hat, key_prod) / pair(ct_prod, key.delta0);
}

GroupElem decrypt_gate(const AttrSecretKey& key, const Dimensions& dims, const GatePair& pair_ct) {
  check_key_dims(key, dims);
  check_gate_dims(pair_ct, dims);
  const GateCiphertext& gate = pair_ct.gate;
  const BlindGateCiphertext& blind = pair_ct.blind;

  GroupElem key_zero, key_zero_hat;
  GroupElem c_zero, c_zero_hat, b_zero, b_zero_hat;
  for (std::size_t i = 0; i < dims.attributes(); ++i) {
    const std::size_t idx = dims.offset(i) + key.list.selections[i];
    if (i == 0) {
      key_zero = key.components[i].zero;
      key_zero_hat = key.components[i].zero_hat;
      c_zero = gate.entries[idx].zero;
      c_zero_hat = gate.entries[idx].zero_hat;
      b_zero = blind.entries[idx].zero;
      b_zero_hat = blind.entries[idx].zero_hat;
    } else {
      key_zero *= key.components[i].zero;
      key_zero_hat *= key.components[i].zero_hat;
      c_zero *= gate.entries[idx].zero;
      c_zero_hat *= gate.entries[idx].zero_hat;
      b_zero *= blind.entries[idx].zero;
      b_zero_hat *= blind.entries[idx].zero_hat;
    }
  }

  const TargetElem blind_factor = blind.c_tilde * (pair(b_zero, key.d0) / pair(blind.c1, key_zero)) *
                                  (pair(b_zero_hat, key.d0_hat) / pair(blind.c1_hat, key_zero_hat));
  const TargetElem gate_factor = (pair(gate.c1, key_zero) / pair(c_zero, key.d0)) *
                                 (pair(gate.c1_hat, key_zero_hat) / pair(c_zero_hat, key.d0_hat));
  return gate.c_tilde / (map_target_to_group(blind_factor) * map_target_to_group(gate_factor));
}

TargetElem decrypt_message(const DataPublicParams& pp, const MessageCiphertext& ct, const GroupElem& dk) {
  return ct.v / (pair(ct.u0, dk) / pair(pp.pp1, ct.u1));
}

std::optional<std::size_t> find_matching_gate(const AttrSecretKey& key, const UserCiphertext& ct) {
  for (std::size_t j = 0; j < ct.gates.size(); ++j) {
    if (match_gate(key, ct.dims, ct.gates[j].gate)) return j;
  }
  return std::nullopt;
}

std::optional<Decryption> anon_decrypt(const DataPublicParams& pp, const UserCiphertext& ct,
                                       const AttrSecretKey& key, std::size_t index) {
  if (index >= ct.messages.size()) throw InvalidInput("message index out of range");
  const auto j = find_matching_gate(key, ct);
  if (!j) return std::nullopt;
  Decryption out;
  out.gate = *j;
  out.dk = DataDecryptionKey{decrypt_gate(key, ct.dims, ct.gates[*j]), ct.epoch};
  out.message = decrypt_message(pp, ct.messages[index], out.dk.dk);
  return out;
}

}  // namespace huap
