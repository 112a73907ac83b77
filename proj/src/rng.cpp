#include "huap/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>
#include <utility>

namespace huap {

namespace {

std::array<std::uint8_t, 32> derive_key(std::uint64_t seed, std::string_view label) {
  static constexpr char kPrefix[] = "huap-rng-v1";
  std::uint8_t be[8];
  for (int i = 0; i < 8; ++i) be[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
  EVP_MD_CTX* sha = EVP_MD_CTX_new();
  EVP_DigestInit_ex(sha, EVP_sha256(), nullptr);
  EVP_DigestUpdate(sha, kPrefix, sizeof(kPrefix) - 1);
  EVP_DigestUpdate(sha, be, sizeof(be));
  EVP_DigestUpdate(sha, label.data(), label.size());
  std::array<std::uint8_t, 32> key{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(sha, key.data(), &len);
  EVP_MD_CTX_free(sha);
  return key;
}

}  // namespace

Rng::Rng() {
  std::array<std::uint8_t, 32> key{};
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  init(key);
}

Rng::Rng(std::uint64_t seed) { init(derive_key(seed, "")); }

Rng::Rng(std::uint64_t seed, std::string_view label) { init(derive_key(seed, label)); }

Rng::~Rng() { EVP_CIPHER_CTX_free(static_cast<EVP_CIPHER_CTX*>(ctx_)); }

Rng::Rng(Rng&& other) noexcept
    : ctx_(std::exchange(other.ctx_, nullptr)), buffer_(other.buffer_), pos_(other.pos_) {}

Rng& Rng::operator=(Rng&& other) noexcept {
  if (this != &other) {
    EVP_CIPHER_CTX_free(static_cast<EVP_CIPHER_CTX*>(ctx_));
    ctx_ = std::exchange(other.ctx_, nullptr);
    buffer_ = other.buffer_;
    pos_ = other.pos_;
  }
  return *this;
}

void Rng::init(std::span<const std::uint8_t, 32> key) {
  auto* ctx = EVP_CIPHER_CTX_new();
  const std::uint8_t iv[16] = {};
  if (ctx == nullptr || EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, key.data(), iv) != 1) {
    EVP_CIPHER_CTX_free(ctx);
    throw std::runtime_error("chacha20 init failed");
  }
  ctx_ = ctx;
  pos_ = buffer_.size();
}

void Rng::refill() {
  static const std::array<std::uint8_t, 256> zeros{};
  int len = 0;
  if (EVP_EncryptUpdate(static_cast<EVP_CIPHER_CTX*>(ctx_), buffer_.data(), &len, zeros.data(),
                        static_cast<int>(zeros.size())) != 1) {
    throw std::runtime_error("chacha20 keystream failed");
  }
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (pos_ == buffer_.size()) refill();
    b = buffer_[pos_++];
  }
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

}  // namespace huap
