// Symmetric bilinear group used by the scheme.
//
// Backend: type-A supersingular curve E: y^2 = x^3 + x over a 512-bit prime
// field with a 160-bit prime-order subgroup G, embedding degree 2 and the
// distortion map (x, y) -> (-x, i*y), so e: G x G -> G_T is symmetric.
// Group operations that go through this API update thread_op_counts().

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "huap/detail/field.hpp"
#include "huap/detail/curve.hpp"

namespace huap {

class Rng;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kGroupElemBytes = 65;
inline constexpr std::size_t kTargetElemBytes = 128;

// Integer modulo the prime group order p.
class Scalar {
 public:
  using Limbs = std::array<std::uint64_t, 3>;

  Scalar() = default;
  static Scalar from_u64(std::uint64_t v);
  // Reduces an arbitrary big-endian byte string modulo p.
  static Scalar from_bytes_reduced(ByteView bytes);
  // Canonical 32-byte big-endian encoding; rejects values >= p.
  static Scalar decode(ByteView bytes);
  static const Limbs& order();

  std::array<std::uint8_t, kScalarBytes> encode() const;
  const Limbs& limbs() const { return v_; }
  bool is_zero() const { return v_[0] == 0 && v_[1] == 0 && v_[2] == 0; }
  // Value divided by p, for statistics in tests.
  double fraction_of_order() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inverse() const;
  bool operator==(const Scalar&) const = default;

 private:
  Limbs v_{};
};

class GroupElem {
 public:
  GroupElem() = default;  // identity
  static GroupElem identity() { return GroupElem{}; }
  static const GroupElem& generator();
  // Decodes the 65-byte compressed form and checks subgroup membership.
  static GroupElem decode(ByteView bytes);
  static GroupElem from_point(const detail::Affine& p) { return GroupElem{p}; }

  std::array<std::uint8_t, kGroupElemBytes> encode() const;
  bool is_identity() const { return p_.infinity; }
  const detail::Affine& point() const { return p_; }

  GroupElem operator*(const GroupElem& o) const;  // M_G
  GroupElem operator/(const GroupElem& o) const;  // M_G
  GroupElem& operator*=(const GroupElem& o) { return *this = *this * o; }
  GroupElem inverse() const;                       // free
  GroupElem pow(const Scalar& k) const;             // E_G
  bool operator==(const GroupElem& o) const { return p_ == o.p_; }

 private:
  explicit GroupElem(const detail::Affine& p) : p_(p) {}
  detail::Affine p_{};
};

class TargetElem {
 public:
  TargetElem() : v_(detail::Fp2::one()) {}  // identity
  static TargetElem identity() { return TargetElem{}; }
  // Decodes 128 bytes (real || imaginary) and checks it lies in the order-p subgroup.
  static TargetElem decode(ByteView bytes);
  static TargetElem from_value(const detail::Fp2& v) { return TargetElem{v}; }

  std::array<std::uint8_t, kTargetElemBytes> encode() const;
  bool is_identity() const { return v_ == detail::Fp2::one(); }
  const detail::Fp2& value() const { return v_; }

  TargetElem operator*(const TargetElem& o) const;  // M_GT
  TargetElem operator/(const TargetElem& o) const;  // M_GT
  TargetElem inverse() const;                        // free (conjugation)
  TargetElem pow(const Scalar& k) const;             // E_GT
  bool operator==(const TargetElem& o) const { return v_ == o.v_; }

 private:
  explicit TargetElem(const detail::Fp2& v) : v_(v) {}
  detail::Fp2 v_;
};

// Builds a comb table so later base.pow() calls run about ten times faster.
// Results and operation counts are unaffected. Thread-safe; keeps the 32
// most recently registered bases.
void precompute_fixed_base(const GroupElem& base);

// e(a, b); counts one pairing.
TargetElem pair(const GroupElem& a, const GroupElem& b);

// H: {0,1}* -> G \ {1}. Try-and-increment onto the curve, then cofactor clearing.
GroupElem hash_to_group(ByteView message);
// Ĥ: {0,1}* -> Z_p^*.
Scalar hash_to_scalar(ByteView message);
// F: G_T -> G, hash_to_group over a dedicated tag and the canonical encoding.
GroupElem map_target_to_group(const TargetElem& z);

// Uniform draw from Z_p (or Z_p^* when nonzero is set), by rejection sampling.
Scalar random_scalar(Rng& rng, bool nonzero = false);
// Uniform element of G; counts one R_G.
GroupElem random_group_elem(Rng& rng);
// Uniform element of G_T (used for fresh KEM keys); not counted.
TargetElem random_target_elem(Rng& rng);

// Tag bytes framing the attribute hash inputs.
enum class AttrHashTag : std::uint8_t { kZero = 0x00, kOne = 0x01, kDelta = 0x02 };
inline constexpr std::uint8_t kTargetMapTag = 0x03;

// tag || be32(index) || be32(len(value)) || value.
Bytes encode_attr_tag(AttrHashTag tag, std::uint32_t attribute_index, std::string_view value);
// H over encode_attr_tag; memoized since attribute hashes repeat constantly.
GroupElem hash_attribute(AttrHashTag tag, std::uint32_t attribute_index, std::string_view value);

}  // namespace huap
