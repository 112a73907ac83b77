#include "huap/algebra.hpp"

#include <gmp.h>
#include <openssl/evp.h>

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "huap/errors.hpp"
#include "huap/metrics.hpp"
#include "huap/rng.hpp"

namespace huap {

using detail::Affine;
using detail::Fp;
using detail::Fp2;

namespace {

constexpr char kHashToGroupDst[] = "HUAP-v1:hash-to-group";
constexpr char kHashToScalarDst[] = "HUAP-v1:hash-to-scalar";
constexpr char kGeneratorSeed[] = "HUAP-v1:generator";

class Mpz {
 public:
  Mpz() { mpz_init(v_); }
  explicit Mpz(std::span<const std::uint64_t> limbs) {
    mpz_init(v_);
    mpz_import(v_, limbs.size(), -1, sizeof(std::uint64_t), 0, 0, limbs.data());
  }
  ~Mpz() { mpz_clear(v_); }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;

  mpz_ptr get() { return v_; }
  mpz_srcptr get() const { return v_; }

  Scalar::Limbs limbs() const {
    Scalar::Limbs out{};
    std::size_t count = 0;
    if (mpz_sizeinbase(v_, 2) > 192) throw InvalidInput("scalar overflow");
    mpz_export(out.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v_);
    return out;
  }

 private:
  mpz_t v_;
};

const Mpz& order_mpz() {
  static const Mpz order{detail::kOrder};
  return order;
}

Scalar scalar_from_mpz(const Mpz& x) {
  std::array<std::uint8_t, kScalarBytes> enc{};
  std::size_t count = (mpz_sizeinbase(x.get(), 2) + 7) / 8;
  if (mpz_sgn(x.get()) != 0) {
    mpz_export(enc.data() + (kScalarBytes - count), &count, 1, 1, 1, 0, x.get());
  }
  return Scalar::decode(enc);
}

template <typename Fn>
Scalar scalar_op(const Scalar& a, const Scalar& b, Fn&& fn) {
  Mpz x{a.limbs()};
  Mpz y{b.limbs()};
  Mpz r;
  fn(r.get(), x.get(), y.get());
  mpz_mod(r.get(), r.get(), order_mpz().get());
  return scalar_from_mpz(r);
}

void sha512(std::span<const ByteView> parts, std::span<std::uint8_t, 64> out) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha512(), nullptr);
  for (const auto& p : parts) EVP_DigestUpdate(ctx, p.data(), p.size());
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, out.data(), &len);
  EVP_MD_CTX_free(ctx);
}

ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::array<std::uint8_t, 4> be32(std::uint32_t v) {
  return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
          static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

// 128 bytes of output bound to (dst, counter, message).
std::array<std::uint8_t, 128> expand(std::string_view dst, std::uint32_t counter, ByteView message,
                                     std::uint8_t lane) {
  std::array<std::uint8_t, 128> out{};
  const auto ctr = be32(counter);
  for (std::uint8_t half = 0; half < 2; ++half) {
    const std::uint8_t sep[2] = {lane, half};
    const ByteView parts[] = {as_bytes(dst), ByteView{sep, 2}, ByteView{ctr}, message};
    sha512(parts, std::span<std::uint8_t, 64>(out.data() + 64 * half, 64));
  }
  return out;
}

Affine hash_to_point(ByteView message) {
  for (std::uint32_t counter = 0;; ++counter) {
    const auto wide = expand(kHashToGroupDst, counter, message, 0);
    const Fp x = Fp::from_wide_bytes(wide);
    const auto sign = expand(kHashToGroupDst, counter, message, 1);
    Affine p;
    if (!detail::lift_x(x, (sign[0] & 1U) != 0, p)) continue;
    Affine cleared = detail::scalar_mul(p, detail::kCofactor);
    if (!cleared.infinity) return cleared;
  }
}

const Fp2& base_pairing() {
  static const Fp2 gt = detail::tate_pairing(GroupElem::generator().point(),
                                             GroupElem::generator().point());
  return gt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::from_u64(std::uint64_t v) {
  std::array<std::uint8_t, kScalarBytes> enc{};
  for (int i = 0; i < 8; ++i) enc[kScalarBytes - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  return from_bytes_reduced(enc);
}

Scalar Scalar::from_bytes_reduced(ByteView bytes) {
  Mpz x;
  if (!bytes.empty()) mpz_import(x.get(), bytes.size(), 1, 1, 1, 0, bytes.data());
  mpz_mod(x.get(), x.get(), order_mpz().get());
  Scalar s;
  s.v_ = x.limbs();
  return s;
}

Scalar Scalar::decode(ByteView bytes) {
  if (bytes.size() != kScalarBytes) throw InvalidInput("scalar encoding must be 32 bytes");
  Mpz x;
  mpz_import(x.get(), bytes.size(), 1, 1, 1, 0, bytes.data());
  if (mpz_cmp(x.get(), order_mpz().get()) >= 0) throw InvalidInput("scalar out of range");
  Scalar s;
  s.v_ = x.limbs();
  return s;
}

const Scalar::Limbs& Scalar::order() { return detail::kOrder; }

std::array<std::uint8_t, kScalarBytes> Scalar::encode() const {
  std::array<std::uint8_t, kScalarBytes> out{};
  for (std::size_t i = 0; i < v_.size(); ++i) {
    for (std::size_t k = 0; k < 8; ++k) {
      out[kScalarBytes - 1 - (i * 8 + k)] = static_cast<std::uint8_t>(v_[i] >> (8 * k));
    }
  }
  return out;
}

double Scalar::fraction_of_order() const {
  Mpz x{v_};
  return mpz_get_d(x.get()) / mpz_get_d(order_mpz().get());
}

Scalar Scalar::operator+(const Scalar& o) const {
  return scalar_op(*this, o, [](mpz_ptr r, mpz_srcptr a, mpz_srcptr b) { mpz_add(r, a, b); });
}

Scalar Scalar::operator-(const Scalar& o) const {
  return scalar_op(*this, o, [](mpz_ptr r, mpz_srcptr a, mpz_srcptr b) { mpz_sub(r, a, b); });
}

Scalar Scalar::operator*(const Scalar& o) const {
  return scalar_op(*this, o, [](mpz_ptr r, mpz_srcptr a, mpz_srcptr b) { mpz_mul(r, a, b); });
}

Scalar Scalar::operator-() const { return Scalar{} - *this; }

Scalar Scalar::inverse() const {
  if (is_zero()) throw InvalidInput("zero has no inverse");
  return scalar_op(*this, *this, [](mpz_ptr r, mpz_srcptr a, mpz_srcptr) {
    mpz_invert(r, a, order_mpz().get());
  });
}

// ---------------------------------------------------------------------------
// GroupElem

const GroupElem& GroupElem::generator() {
  static const GroupElem g{hash_to_point(as_bytes(kGeneratorSeed))};
  return g;
}

std::array<std::uint8_t, kGroupElemBytes> GroupElem::encode() const {
  std::array<std::uint8_t, kGroupElemBytes> out{};
  if (p_.infinity) return out;
  out[0] = detail::is_odd(p_.y) ? 0x03 : 0x02;
  p_.x.to_bytes(std::span<std::uint8_t, detail::kFieldBytes>(out.data() + 1, detail::kFieldBytes));
  return out;
}

GroupElem GroupElem::decode(ByteView bytes) {
  if (bytes.size() != kGroupElemBytes) throw InvalidInput("group element must be 65 bytes");
  if (bytes[0] == 0x00) {
    for (std::size_t i = 1; i < bytes.size(); ++i) {
      if (bytes[i] != 0) throw InvalidInput("non-canonical identity encoding");
    }
    return GroupElem{};
  }
  if (bytes[0] != 0x02 && bytes[0] != 0x03) throw InvalidInput("bad group element prefix");
  Fp x;
  if (!Fp::from_bytes(std::span<const std::uint8_t, detail::kFieldBytes>(bytes.data() + 1,
                                                                         detail::kFieldBytes),
                      x)) {
    throw InvalidInput("group element coordinate out of range");
  }
  Affine p;
  if (!detail::lift_x(x, bytes[0] == 0x03, p)) throw InvalidInput("point not on curve");
  if (!detail::in_prime_subgroup(p)) throw InvalidInput("point not in prime-order subgroup");
  return GroupElem{p};
}

GroupElem GroupElem::operator*(const GroupElem& o) const {
  ++thread_op_counts().mul_g;
  return GroupElem{detail::affine_add(p_, o.p_)};
}

GroupElem GroupElem::operator/(const GroupElem& o) const {
  ++thread_op_counts().mul_g;
  return GroupElem{detail::affine_add(p_, detail::negate(o.p_))};
}

GroupElem GroupElem::inverse() const { return GroupElem{detail::negate(p_)}; }

namespace {

struct FixedBaseRegistry {
  static constexpr std::size_t kMaxTables = 32;
  std::mutex mu;
  std::vector<std::shared_ptr<const detail::FixedBaseTable>> tables;  // oldest first
};

FixedBaseRegistry& fixed_base_registry() {
  static FixedBaseRegistry r;
  return r;
}

std::shared_ptr<const detail::FixedBaseTable> find_fixed_base(const Affine& p) {
  auto& r = fixed_base_registry();
  std::lock_guard lock(r.mu);
  for (const auto& t : r.tables) {
    if (t->base() == p) return t;
  }
  return nullptr;
}

const detail::FixedBaseTable& generator_table() {
  static const detail::FixedBaseTable table(GroupElem::generator().point());
  return table;
}

}  // namespace

void precompute_fixed_base(const GroupElem& base) {
  if (base.is_identity() || find_fixed_base(base.point())) return;
  auto table = std::make_shared<const detail::FixedBaseTable>(base.point());
  auto& r = fixed_base_registry();
  std::lock_guard lock(r.mu);
  for (const auto& t : r.tables) {
    if (t->base() == base.point()) return;
  }
  if (r.tables.size() == FixedBaseRegistry::kMaxTables) r.tables.erase(r.tables.begin());
  r.tables.push_back(std::move(table));
}

GroupElem GroupElem::pow(const Scalar& k) const {
  ++thread_op_counts().exp_g;
  if (auto table = find_fixed_base(p_)) return GroupElem{table->mul(k.limbs())};
  return GroupElem{detail::scalar_mul(p_, k.limbs())};
}

// ---------------------------------------------------------------------------
// TargetElem

std::array<std::uint8_t, kTargetElemBytes> TargetElem::encode() const {
  std::array<std::uint8_t, kTargetElemBytes> out{};
  v_.a.to_bytes(std::span<std::uint8_t, detail::kFieldBytes>(out.data(), detail::kFieldBytes));
  v_.b.to_bytes(std::span<std::uint8_t, detail::kFieldBytes>(out.data() + detail::kFieldBytes,
                                                             detail::kFieldBytes));
  return out;
}

TargetElem TargetElem::decode(ByteView bytes) {
  if (bytes.size() != kTargetElemBytes) throw InvalidInput("target element must be 128 bytes");
  Fp2 v;
  if (!Fp::from_bytes(std::span<const std::uint8_t, detail::kFieldBytes>(bytes.data(),
                                                                         detail::kFieldBytes),
                      v.a) ||
      !Fp::from_bytes(std::span<const std::uint8_t, detail::kFieldBytes>(
                          bytes.data() + detail::kFieldBytes, detail::kFieldBytes),
                      v.b)) {
    throw InvalidInput("target element coordinate out of range");
  }
  if (!(detail::sqr(v.a) + detail::sqr(v.b) == Fp::one()) ||
      !(detail::pow(v, detail::kOrder) == Fp2::one())) {
    throw InvalidInput("value not in the target group");
  }
  return TargetElem{v};
}

TargetElem TargetElem::operator*(const TargetElem& o) const {
  ++thread_op_counts().mul_gt;
  return TargetElem{v_ * o.v_};
}

TargetElem TargetElem::operator/(const TargetElem& o) const {
  ++thread_op_counts().mul_gt;
  return TargetElem{v_ * detail::conj(o.v_)};
}

TargetElem TargetElem::inverse() const { return TargetElem{detail::conj(v_)}; }

TargetElem TargetElem::pow(const Scalar& k) const {
  ++thread_op_counts().exp_gt;
  return TargetElem{detail::pow(v_, k.limbs())};
}

// ---------------------------------------------------------------------------
// Maps

TargetElem pair(const GroupElem& a, const GroupElem& b) {
  ++thread_op_counts().pairings;
  return TargetElem::from_value(detail::tate_pairing(a.point(), b.point()));
}

GroupElem hash_to_group(ByteView message) { return GroupElem::from_point(hash_to_point(message)); }

Scalar hash_to_scalar(ByteView message) {
  for (std::uint32_t counter = 0;; ++counter) {
    const auto wide = expand(kHashToScalarDst, counter, message, 0);
    Scalar s = Scalar::from_bytes_reduced(wide);
    if (!s.is_zero()) return s;
  }
}

GroupElem map_target_to_group(const TargetElem& z) {
  Bytes input;
  input.reserve(1 + kTargetElemBytes);
  input.push_back(kTargetMapTag);
  const auto enc = z.encode();
  input.insert(input.end(), enc.begin(), enc.end());
  return hash_to_group(input);
}

Scalar random_scalar(Rng& rng, bool nonzero) {
  // The order has exactly 160 bits; draw 20 bytes and reject out-of-range values.
  for (;;) {
    std::array<std::uint8_t, 20> raw{};
    rng.fill(raw);
    std::array<std::uint8_t, kScalarBytes> enc{};
    std::copy(raw.begin(), raw.end(), enc.end() - static_cast<std::ptrdiff_t>(raw.size()));
    Mpz x;
    mpz_import(x.get(), enc.size(), 1, 1, 1, 0, enc.data());
    if (mpz_cmp(x.get(), order_mpz().get()) >= 0) continue;
    Scalar s = Scalar::decode(enc);
    if (nonzero && s.is_zero()) continue;
    return s;
  }
}

GroupElem random_group_elem(Rng& rng) {
  ++thread_op_counts().rand_g;
  const Scalar k = random_scalar(rng, true);
  return GroupElem::from_point(generator_table().mul(k.limbs()));
}

TargetElem random_target_elem(Rng& rng) {
  const Scalar k = random_scalar(rng, true);
  return TargetElem::from_value(detail::pow(base_pairing(), k.limbs()));
}

Bytes encode_attr_tag(AttrHashTag tag, std::uint32_t attribute_index, std::string_view value) {
  Bytes out;
  out.reserve(9 + value.size());
  out.push_back(static_cast<std::uint8_t>(tag));
  const auto idx = be32(attribute_index);
  const auto len = be32(static_cast<std::uint32_t>(value.size()));
  out.insert(out.end(), idx.begin(), idx.end());
  out.insert(out.end(), len.begin(), len.end());
  out.insert(out.end(), value.begin(), value.end());
  return out;
}

GroupElem hash_attribute(AttrHashTag tag, std::uint32_t attribute_index, std::string_view value) {
  static std::mutex mu;
  static std::unordered_map<std::string, Affine> cache;
  constexpr std::size_t kMaxEntries = 1U << 16;

  const Bytes input = encode_attr_tag(tag, attribute_index, value);
  std::string key(input.begin(), input.end());
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return GroupElem::from_point(it->second);
  }
  const Affine p = hash_to_point(input);
  std::lock_guard lock(mu);
  if (cache.size() >= kMaxEntries) cache.clear();
  cache.emplace(std::move(key), p);
  return GroupElem::from_point(p);
}

}  // namespace huap
