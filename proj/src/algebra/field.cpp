#include "huap/detail/field.hpp"

#include <gmp.h>

#include <algorithm>

namespace huap::detail {

namespace {

Limbs to_montgomery(const Limbs& plain) { return fp_impl::mont_mul(plain, kMontR2); }

Limbs from_montgomery(const Limbs& mont) {
  Limbs one{};
  one[0] = 1;
  return fp_impl::mont_mul(mont, one);
}

Limbs limbs_from_be(std::span<const std::uint8_t, kFieldBytes> in) {
  Limbs out{};
  for (std::size_t i = 0; i < kLimbs; ++i) {
    std::uint64_t w = 0;
    for (std::size_t k = 0; k < 8; ++k) w = (w << 8) | in[(kLimbs - 1 - i) * 8 + k];
    out[i] = w;
  }
  return out;
}

}  // namespace

Fp Fp::from_u64(std::uint64_t x) {
  Limbs plain{};
  plain[0] = x;
  return Fp{to_montgomery(plain)};
}

bool Fp::from_bytes(std::span<const std::uint8_t, kFieldBytes> in, Fp& out) {
  const Limbs plain = limbs_from_be(in);
  if (fp_impl::geq_modulus(plain)) return false;
  out = Fp{to_montgomery(plain)};
  return true;
}

Fp Fp::from_wide_bytes(std::span<const std::uint8_t> in) {
  mpz_t x, q;
  mpz_init(x);
  mpz_init(q);
  mpz_import(x, in.size(), 1, 1, 1, 0, in.data());
  mpz_import(q, kLimbs, -1, sizeof(std::uint64_t), 0, 0, kModulus.data());
  mpz_mod(x, x, q);
  Limbs plain{};
  std::size_t count = 0;
  mpz_export(plain.data(), &count, -1, sizeof(std::uint64_t), 0, 0, x);
  mpz_clear(x);
  mpz_clear(q);
  return Fp{to_montgomery(plain)};
}

Limbs Fp::canonical() const { return from_montgomery(v); }

void Fp::to_bytes(std::span<std::uint8_t, kFieldBytes> out) const {
  const Limbs plain = canonical();
  for (std::size_t i = 0; i < kLimbs; ++i) {
    const std::uint64_t w = plain[kLimbs - 1 - i];
    for (std::size_t k = 0; k < 8; ++k) out[i * 8 + k] = static_cast<std::uint8_t>(w >> (56 - 8 * k));
  }
}

std::size_t bit_length(std::span<const std::uint64_t> limbs) {
  for (std::size_t i = limbs.size(); i-- > 0;) {
    if (limbs[i] != 0) return i * 64 + (64 - static_cast<std::size_t>(__builtin_clzll(limbs[i])));
  }
  return 0;
}

Fp pow(const Fp& base, std::span<const std::uint64_t> exponent) {
  const std::size_t bits = bit_length(exponent);
  Fp acc = Fp::one();
  for (std::size_t i = bits; i-- > 0;) {
    acc = sqr(acc);
    if (test_bit(exponent, i)) acc = acc * base;
  }
  return acc;
}

Fp inverse(const Fp& a) {
  // a is in Montgomery form aR; invert the plain value with GMP and map back.
  const Limbs plain = a.canonical();
  mpz_t x, q;
  mpz_init(x);
  mpz_init(q);
  mpz_import(x, kLimbs, -1, sizeof(std::uint64_t), 0, 0, plain.data());
  mpz_import(q, kLimbs, -1, sizeof(std::uint64_t), 0, 0, kModulus.data());
  Limbs inv{};
  if (mpz_invert(x, x, q) != 0) {
    std::size_t count = 0;
    mpz_export(inv.data(), &count, -1, sizeof(std::uint64_t), 0, 0, x);
  }
  mpz_clear(x);
  mpz_clear(q);
  return Fp{to_montgomery(inv)};
}

bool sqrt(const Fp& a, Fp& root) {
  root = pow(a, kSqrtExp);
  return sqr(root) == a;
}

bool is_odd(const Fp& a) { return (a.canonical()[0] & 1U) != 0; }

Fp2 inverse(const Fp2& x) {
  const Fp norm_inv = inverse(sqr(x.a) + sqr(x.b));
  return {x.a * norm_inv, -(x.b * norm_inv)};
}

Fp2 pow(const Fp2& base, std::span<const std::uint64_t> exponent) {
  const std::size_t bits = bit_length(exponent);
  if (bits == 0) return Fp2::one();
  // 4-bit fixed window.
  std::array<Fp2, 16> table;
  table[0] = Fp2::one();
  for (std::size_t i = 1; i < table.size(); ++i) table[i] = table[i - 1] * base;
  const std::size_t windows = (bits + 3) / 4;
  Fp2 acc = Fp2::one();
  for (std::size_t w = windows; w-- > 0;) {
    if (w + 1 != windows) {
      for (int s = 0; s < 4; ++s) acc = sqr(acc);
    }
    unsigned nibble = 0;
    for (std::size_t k = 4; k-- > 0;) {
      const std::size_t bit = w * 4 + k;
      nibble = (nibble << 1) | ((bit < exponent.size() * 64 && test_bit(exponent, bit)) ? 1U : 0U);
    }
    if (nibble != 0) acc = acc * table[nibble];
  }
  return acc;
}

}  // namespace huap::detail
