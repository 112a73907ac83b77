// Hidden-policy attribute-based encryption with offline/online encryption,
// epoch-based cloud re-encryption and constant-pairing decryption.
//
// Roles: the attribute authority holds SystemMasterKey; the data owner holds
// DataSecretParams and ReencKey and publishes DataPublicParams; devices hold
// only public values; the cloud holds ReencKey; users hold AttrSecretKey.
//
// Value (i, t) of the universe is entry offset(i) + t of every per-value
// vector. Attribute indices fed to the hashes are 1-based.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "huap/algebra.hpp"
#include "huap/policy.hpp"

namespace huap {

class Rng;

struct Dimensions {
  std::vector<std::uint32_t> values_per_attribute;

  static Dimensions of(const Universe& universe) { return Dimensions{universe.dimensions()}; }
  std::size_t attributes() const { return values_per_attribute.size(); }
  std::size_t total() const;
  std::size_t offset(std::size_t i) const;
  bool operator==(const Dimensions&) const = default;
};

struct SystemPublicKey {
  GroupElem g, g1, g2, g3, g4;
  TargetElem y;  // e(g1, g2)^master
  bool operator==(const SystemPublicKey&) const = default;
};

struct SystemMasterKey {
  Scalar y;
  bool operator==(const SystemMasterKey&) const = default;
};

struct DataPublicParams {
  GroupElem q0;   // g3^sk
  TargetElem pp0; // e(g3, g4)^mk0
  GroupElem pp1;  // g3^mk1
  bool operator==(const DataPublicParams&) const = default;
};

struct DataSecretParams {
  Scalar mk0, mk1, sk;
  GroupElem sk1;  // g4^mk0
  bool operator==(const DataSecretParams&) const = default;
};

struct ReencKey {
  Scalar s;
  bool operator==(const ReencKey&) const = default;
};

struct AttrSecretKey {
  struct Component {
    GroupElem delta;     // g2^rhat_i * H(i||v)^r
    GroupElem zero;      // g1^r_i * H(0||i||v)^lambda
    GroupElem zero_hat;  // g2^r_i * H(1||i||v)^lambdahat
    bool operator==(const Component&) const = default;
  };
  AttributeList list;
  GroupElem d0;          // g2^lambda
  GroupElem d0_hat;      // g1^lambdahat
  GroupElem delta0;      // g1^r
  GroupElem delta0_hat;  // g2^(y - rhat)
  std::vector<Component> components;
  bool operator==(const AttrSecretKey&) const = default;
};

struct OfflineCiphertext {
  GroupElem u0, u1;
  TargetElem v0;
  bool consumed = false;
  bool operator==(const OfflineCiphertext&) const = default;
};

struct MessageCiphertext {
  GroupElem u0, u1;
  TargetElem v;
  bool operator==(const MessageCiphertext&) const = default;
};

// Per-gate ciphertext whose decryption yields the data decryption key.
struct GateCiphertext {
  struct Entry {
    GroupElem delta, zero, zero_hat;
    bool operator==(const Entry&) const = default;
  };
  GroupElem c_tilde;  // dk * F(Y^s1), re-blinded per epoch
  TargetElem c_delta; // Y^s1'
  GroupElem c0_hat;   // g1^s1'
  GroupElem c1;       // g2^s1''
  GroupElem c1_hat;   // g1^(s1 - s1'')
  std::vector<Entry> entries;
  bool operator==(const GateCiphertext&) const = default;
};

// Companion of a gate that carries the cloud's per-epoch blinding.
struct BlindGateCiphertext {
  struct Entry {
    GroupElem zero, zero_hat;
    bool operator==(const Entry&) const = default;
  };
  TargetElem c_tilde;  // Y^s2, Y^r_w * (.)^r'' after re-encryption
  GroupElem c1;        // g2^s2''
  GroupElem c1_hat;    // g1^(s2 - s2'')
  std::vector<Entry> entries;
  bool operator==(const BlindGateCiphertext&) const = default;
};

struct GatePair {
  GateCiphertext gate;
  BlindGateCiphertext blind;
  bool operator==(const GatePair&) const = default;
};

struct PolicyCiphertext {
  Dimensions dims;
  std::vector<GatePair> gates;
  bool operator==(const PolicyCiphertext&) const = default;
};

// Object as stored by the cloud: epoch-0 policy part plus message parts.
struct CloudCiphertext {
  Dimensions dims;
  std::vector<MessageCiphertext> messages;
  std::vector<GatePair> gates;
  bool operator==(const CloudCiphertext&) const = default;
};

// Object as published to users at one epoch.
struct UserCiphertext {
  std::uint64_t epoch = 0;
  Dimensions dims;
  std::vector<MessageCiphertext> messages;
  std::vector<GatePair> gates;
  bool operator==(const UserCiphertext&) const = default;
};

struct DataDecryptionKey {
  GroupElem dk;
  std::uint64_t epoch = 0;
  bool operator==(const DataDecryptionKey&) const = default;
};

// --- attribute authority -----------------------------------------------------

struct SystemKeys {
  SystemPublicKey pk;
  SystemMasterKey mk;
};
SystemKeys system_setup(Rng& rng);

// Keys for list L over the universe. Throws InvalidInput on an invalid list.
AttrSecretKey attr_keygen(const SystemPublicKey& pk, const SystemMasterKey& mk, const Universe& universe,
                          const AttributeList& list, Rng& rng);

// Public consistency check of a key against its own list: the delta
// components and both share families must recombine to Y.
bool attr_key_self_test(const SystemPublicKey& pk, const Universe& universe, const AttrSecretKey& key);

// --- data owner --------------------------------------------------------------

struct OwnerParams {
  DataPublicParams pp;
  DataSecretParams sp;
};
OwnerParams owner_param_setup(const SystemPublicKey& pk, Rng& rng);

ReencKey reenc_keygen(Rng& rng);
// S_l = Ĥ(s || be64(l)).
Scalar epoch_secret(const ReencKey& rk, std::uint64_t epoch);

// dk_l = SK1 * PP1^(sk + S_l).
GroupElem derive_dk(const DataPublicParams& pp, const DataSecretParams& sp, const Scalar& epoch_secret);

// Encrypts the policy at epoch 0. Throws InvalidInput on an invalid policy.
PolicyCiphertext anon_encrypt(const SystemPublicKey& pk, const DataPublicParams& pp, const DataSecretParams& sp,
                              const ReencKey& rk, const Universe& universe, const Policy& policy, Rng& rng);
// Same, with the epoch-0 dk supplied by the caller.
PolicyCiphertext anon_encrypt(const SystemPublicKey& pk, const GroupElem& dk0, const Universe& universe,
                              const Policy& policy, Rng& rng);

// Multiplicative shares of the identity: count - 1 uniform elements and the
// inverse of their product.
std::vector<GroupElem> identity_shares(std::size_t count, Rng& rng);

// --- device ------------------------------------------------------------------

OfflineCiphertext offline_encrypt(const SystemPublicKey& pk, const DataPublicParams& pp, Rng& rng);
// V = M * V0; marks the offline ciphertext consumed. Throws ProtocolError on reuse.
MessageCiphertext online_encrypt(const TargetElem& message, OfflineCiphertext& offline);

// --- cloud -------------------------------------------------------------------

MessageCiphertext reencrypt_message(const SystemPublicKey& pk, const DataPublicParams& pp,
                                    const Scalar& epoch_secret, const MessageCiphertext& ct, Rng& rng);
GatePair reencrypt_gate(const SystemPublicKey& pk, const DataPublicParams& pp, const Scalar& epoch_secret,
                        const Scalar& base_secret, const GatePair& gate, Rng& rng);
// Re-encrypts the stored (epoch-0) object for epoch >= 1.
UserCiphertext reencrypt(const SystemPublicKey& pk, const DataPublicParams& pp, const ReencKey& rk,
                         std::uint64_t epoch, const CloudCiphertext& ct, Rng& rng);

// --- data user ---------------------------------------------------------------

// Two-pairing test of whether the key's list satisfies the gate. Throws
// InvalidInput when the key and ciphertext cover different universes.
bool match_gate(const AttrSecretKey& key, const Dimensions& dims, const GateCiphertext& gate);
// Recovers dk from a matched gate.
GroupElem decrypt_gate(const AttrSecretKey& key, const Dimensions& dims, const GatePair& gate);
// M = V / (e(U0, dk) / e(PP1, U1)).
TargetElem decrypt_message(const DataPublicParams& pp, const MessageCiphertext& ct, const GroupElem& dk);

struct Decryption {
  TargetElem message;
  DataDecryptionKey dk;
  std::size_t gate = 0;
};
// First matching gate, then decryption of message part `index`; nullopt when
// no gate matches.
std::optional<Decryption> anon_decrypt(const DataPublicParams& pp, const UserCiphertext& ct,
                                       const AttrSecretKey& key, std::size_t index = 0);
// Index of the first matching gate, if any.
std::optional<std::size_t> find_matching_gate(const AttrSecretKey& key, const UserCiphertext& ct);

}  // namespace huap
