// Authenticated payload encryption under a key derived from a G_T element.
//
// key = HKDF-SHA256(ikm = encode(M), salt = empty, info = "HUAP-v1:payload")
// sealed = 0x01 || nonce (12) || AES-256-GCM ciphertext || tag (16)

#pragma once

#include "huap/algebra.hpp"

namespace huap {

inline constexpr std::uint8_t kPayloadVersion = 0x01;
inline constexpr std::size_t kPayloadOverhead = 1 + 12 + 16;

Bytes seal_payload(const TargetElem& key_element, ByteView plaintext, Rng& rng);
// Throws AuthFailure on a wrong key or any tampering, InvalidInput on a
// malformed blob.
Bytes open_payload(const TargetElem& key_element, ByteView sealed);

}  // namespace huap
