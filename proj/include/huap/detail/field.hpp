// Prime-field and quadratic-extension arithmetic for the type-A curve.
// Internal header: nothing here touches the operation counters.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include <gmp.h>

namespace huap::detail {

#include "params.inc"

inline constexpr std::size_t kLimbs = 8;
inline constexpr std::size_t kFieldBytes = 64;

using Limbs = std::array<std::uint64_t, kLimbs>;
using u128 = unsigned __int128;

// Element of F_q held in Montgomery form (value * 2^512 mod q), always < q.
struct Fp {
  Limbs v{};

  static Fp zero() { return Fp{}; }
  static Fp one() { return Fp{kMontOne}; }
  static Fp from_u64(std::uint64_t x);
  // Big-endian canonical bytes; returns false if the value is >= q.
  static bool from_bytes(std::span<const std::uint8_t, kFieldBytes> in, Fp& out);
  // Reduces an arbitrary-length big-endian byte string modulo q.
  static Fp from_wide_bytes(std::span<const std::uint8_t> in);

  void to_bytes(std::span<std::uint8_t, kFieldBytes> out) const;
  Limbs canonical() const;

  bool is_zero() const {
    std::uint64_t acc = 0;
    for (auto x : v) acc |= x;
    return acc == 0;
  }
  bool operator==(const Fp&) const = default;
};

namespace fp_impl {

inline bool geq_modulus(const Limbs& a) {
  for (std::size_t i = kLimbs; i-- > 0;) {
    if (a[i] != kModulus[i]) return a[i] > kModulus[i];
  }
  return true;
}

inline std::uint64_t sub_modulus(Limbs& a) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    u128 d = static_cast<u128>(a[i]) - kModulus[i] - borrow;
    a[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1;
  }
  return borrow;
}

inline void add_modulus(Limbs& a) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    u128 s = static_cast<u128>(a[i]) + kModulus[i] + carry;
    a[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
}

// Montgomery reduction of a double-width product t (2k + 1 limbs, top zero).
inline Limbs mont_reduce(mp_limb_t* t) {
  static_assert(sizeof(mp_limb_t) == sizeof(std::uint64_t));
  const auto* mod = reinterpret_cast<const mp_limb_t*>(kModulus.data());
  for (std::size_t i = 0; i < kLimbs; ++i) {
    const mp_limb_t m = t[i] * kMontInv;
    const mp_limb_t carry = mpn_addmul_1(t + i, mod, kLimbs, m);
    mpn_add_1(t + i + kLimbs, t + i + kLimbs, kLimbs + 1 - i, carry);
  }
  Limbs r;
  for (std::size_t i = 0; i < kLimbs; ++i) r[i] = t[kLimbs + i];
  if (t[2 * kLimbs] != 0 || geq_modulus(r)) sub_modulus(r);
  return r;
}

inline Limbs mont_mul(const Limbs& a, const Limbs& b) {
  mp_limb_t t[2 * kLimbs + 1];
  mpn_mul_n(t, reinterpret_cast<const mp_limb_t*>(a.data()), reinterpret_cast<const mp_limb_t*>(b.data()), kLimbs);
  t[2 * kLimbs] = 0;
  return mont_reduce(t);
}

inline Limbs mont_sqr(const Limbs& a) {
  mp_limb_t t[2 * kLimbs + 1];
  mpn_sqr(t, reinterpret_cast<const mp_limb_t*>(a.data()), kLimbs);
  t[2 * kLimbs] = 0;
  return mont_reduce(t);
}

}  // namespace fp_impl

inline Fp operator+(const Fp& a, const Fp& b) {
  Fp r;
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    u128 s = static_cast<u128>(a.v[i]) + b.v[i] + carry;
    r.v[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  if (carry != 0 || fp_impl::geq_modulus(r.v)) fp_impl::sub_modulus(r.v);
  return r;
}

inline Fp operator-(const Fp& a, const Fp& b) {
  Fp r;
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    u128 d = static_cast<u128>(a.v[i]) - b.v[i] - borrow;
    r.v[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1;
  }
  if (borrow != 0) fp_impl::add_modulus(r.v);
  return r;
}

inline Fp operator-(const Fp& a) { return Fp::zero() - a; }

inline Fp operator*(const Fp& a, const Fp& b) { return Fp{fp_impl::mont_mul(a.v, b.v)}; }

inline Fp& operator+=(Fp& a, const Fp& b) { return a = a + b; }
inline Fp& operator-=(Fp& a, const Fp& b) { return a = a - b; }
inline Fp& operator*=(Fp& a, const Fp& b) { return a = a * b; }

inline Fp sqr(const Fp& a) { return Fp{fp_impl::mont_sqr(a.v)}; }
inline Fp dbl(const Fp& a) { return a + a; }

// Left-to-right square-and-multiply; exponent given as little-endian limbs.
Fp pow(const Fp& base, std::span<const std::uint64_t> exponent);
Fp inverse(const Fp& a);
// Square root for q = 3 mod 4; returns false when a is a non-residue.
bool sqrt(const Fp& a, Fp& root);
// Parity of the canonical representative.
bool is_odd(const Fp& a);

// F_q[i] / (i^2 + 1).
struct Fp2 {
  Fp a;  // real
  Fp b;  // imaginary

  static Fp2 zero() { return Fp2{}; }
  static Fp2 one() { return Fp2{Fp::one(), Fp::zero()}; }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool operator==(const Fp2&) const = default;
};

inline Fp2 operator+(const Fp2& x, const Fp2& y) { return {x.a + y.a, x.b + y.b}; }
inline Fp2 operator-(const Fp2& x, const Fp2& y) { return {x.a - y.a, x.b - y.b}; }

inline Fp2 operator*(const Fp2& x, const Fp2& y) {
  const Fp aa = x.a * y.a;
  const Fp bb = x.b * y.b;
  const Fp cross = (x.a + x.b) * (y.a + y.b);
  return {aa - bb, cross - aa - bb};
}

inline Fp2 sqr(const Fp2& x) {
  const Fp ab = x.a * x.b;
  return {(x.a + x.b) * (x.a - x.b), dbl(ab)};
}

inline Fp2 conj(const Fp2& x) { return {x.a, -x.b}; }

Fp2 inverse(const Fp2& x);
Fp2 pow(const Fp2& base, std::span<const std::uint64_t> exponent);

// Number of significant bits in a little-endian limb string.
std::size_t bit_length(std::span<const std::uint64_t> limbs);

inline bool test_bit(std::span<const std::uint64_t> limbs, std::size_t bit) {
  return (limbs[bit / 64] >> (bit % 64)) & 1U;
}

}  // namespace huap::detail
