// Supersingular curve y^2 = x^3 + x over F_q and its reduced Tate pairing
// through the distortion map (x, y) -> (-x, i*y). Internal header.

#pragma once

#include <span>
#include <vector>

#include "field.hpp"

namespace huap::detail {

struct Affine {
  Fp x;
  Fp y;
  bool infinity = true;

  bool operator==(const Affine& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
  }
};

// Jacobian coordinates (X/Z^2, Y/Z^3); Z == 0 encodes the point at infinity.
struct Jacobian {
  Fp x;
  Fp y;
  Fp z;

  bool is_infinity() const { return z.is_zero(); }
  static Jacobian infinity() { return Jacobian{Fp::one(), Fp::one(), Fp::zero()}; }
  static Jacobian from_affine(const Affine& p) {
    return p.infinity ? infinity() : Jacobian{p.x, p.y, Fp::one()};
  }
};

bool on_curve(const Affine& p);
Affine negate(const Affine& p);
Jacobian jacobian_double(const Jacobian& p);
Jacobian jacobian_add_affine(const Jacobian& p, const Affine& q);
Affine to_affine(const Jacobian& p);
std::vector<Affine> batch_to_affine(std::span<const Jacobian> points);

Affine affine_add(const Affine& a, const Affine& b);
// Scalar multiplication by a little-endian limb string (any width).
Affine scalar_mul(const Affine& p, std::span<const std::uint64_t> k);
bool in_prime_subgroup(const Affine& p);

// Precomputed multiples d * 16^w * base (d in 1..15) for scalars up to
// 4 * windows bits; mul() then needs only mixed additions.
class FixedBaseTable {
 public:
  explicit FixedBaseTable(const Affine& base, std::size_t windows = 40);
  const Affine& base() const { return base_; }
  Affine mul(std::span<const std::uint64_t> k) const;

 private:
  Affine base_;
  std::size_t windows_;
  std::vector<Affine> table_;
};

// Lifts x to a curve point with the requested y parity, if x^3 + x is a square.
bool lift_x(const Fp& x, bool odd_y, Affine& out);

// Reduced Tate pairing e(p, psi(q)); symmetric on the order-r subgroup.
Fp2 tate_pairing(const Affine& p, const Affine& q);

// Final exponentiation f^((q^2 - 1) / r).
Fp2 final_exponentiation(const Fp2& f);

}  // namespace huap::detail
