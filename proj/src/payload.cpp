#include "huap/payload.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <array>
#include <memory>

#include "huap/errors.hpp"
#include "huap/rng.hpp"

namespace huap {

namespace {

constexpr char kPayloadInfo[] = "HUAP-v1:payload";
constexpr std::size_t kNonceBytes = 12;
constexpr std::size_t kTagBytes = 16;

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

std::array<std::uint8_t, 32> derive_key(const TargetElem& element) {
  const auto ikm = element.encode();
  std::unique_ptr<EVP_KDF, decltype(&EVP_KDF_free)> kdf(EVP_KDF_fetch(nullptr, "HKDF", nullptr), EVP_KDF_free);
  if (!kdf) throw Error("HKDF unavailable");
  std::unique_ptr<EVP_KDF_CTX, decltype(&EVP_KDF_CTX_free)> ctx(EVP_KDF_CTX_new(kdf.get()), EVP_KDF_CTX_free);
  char digest[] = "SHA256";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest, 0),
      OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY, const_cast<std::uint8_t*>(ikm.data()), ikm.size()),
      OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_INFO, const_cast<char*>(kPayloadInfo),
                                        sizeof(kPayloadInfo) - 1),
      OSSL_PARAM_construct_end()};
  std::array<std::uint8_t, 32> key{};
  if (!ctx || EVP_KDF_derive(ctx.get(), key.data(), key.size(), params) != 1) throw Error("HKDF failed");
  return key;
}

}  // namespace

Bytes seal_payload(const TargetElem& key_element, ByteView plaintext, Rng& rng) {
  const auto key = derive_key(key_element);
  Bytes out(1 + kNonceBytes + plaintext.size() + kTagBytes);
  out[0] = kPayloadVersion;
  std::uint8_t* nonce = out.data() + 1;
  rng.fill(std::span<std::uint8_t>(nonce, kNonceBytes));

  CipherCtx ctx(EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
  int len = 0;
  const std::array<std::uint8_t, 1> aad{kPayloadVersion};
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + 1 + kNonceBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + 1 + kNonceBytes + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(kTagBytes),
                          out.data() + out.size() - kTagBytes) != 1) {
    throw Error("AES-GCM encryption failed");
  }
  return out;
}

Bytes open_payload(const TargetElem& key_element, ByteView sealed) {
  if (sealed.size() < kPayloadOverhead) throw InvalidInput("sealed payload too short");
  if (sealed[0] != kPayloadVersion) throw InvalidInput("unsupported payload version");
  const auto key = derive_key(key_element);
  const std::uint8_t* nonce = sealed.data() + 1;
  const std::size_t body = sealed.size() - kPayloadOverhead;
  Bytes out(body);

  CipherCtx ctx(EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
  int len = 0;
  const std::array<std::uint8_t, 1> aad{kPayloadVersion};
  Bytes tag(sealed.end() - kTagBytes, sealed.end());
  if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce) != 1 ||
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data() + 1 + kNonceBytes, static_cast<int>(body)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, static_cast<int>(kTagBytes), tag.data()) != 1) {
    throw Error("AES-GCM setup failed");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) throw AuthFailure("payload authentication failed");
  return out;
}

}  // namespace huap
