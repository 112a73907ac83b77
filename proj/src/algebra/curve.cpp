#include "huap/detail/curve.hpp"

#include <array>

namespace huap::detail {

bool on_curve(const Affine& p) {
  if (p.infinity) return true;
  return sqr(p.y) == p.x * sqr(p.x) + p.x;
}

Affine negate(const Affine& p) {
  if (p.infinity) return p;
  return Affine{p.x, -p.y, false};
}

// dbl-2007-bl with a = 1.
Jacobian jacobian_double(const Jacobian& p) {
  if (p.is_infinity() || p.y.is_zero()) return Jacobian::infinity();
  const Fp xx = sqr(p.x);
  const Fp yy = sqr(p.y);
  const Fp yyyy = sqr(yy);
  const Fp zz = sqr(p.z);
  const Fp s = dbl(sqr(p.x + yy) - xx - yyyy);
  const Fp m = dbl(xx) + xx + sqr(zz);
  const Fp x3 = sqr(m) - dbl(s);
  const Fp y3 = m * (s - x3) - dbl(dbl(dbl(yyyy)));
  const Fp z3 = sqr(p.y + p.z) - yy - zz;
  return Jacobian{x3, y3, z3};
}

Jacobian jacobian_add_affine(const Jacobian& p, const Affine& q) {
  if (q.infinity) return p;
  if (p.is_infinity()) return Jacobian::from_affine(q);
  const Fp zz = sqr(p.z);
  const Fp u2 = q.x * zz;
  const Fp s2 = q.y * p.z * zz;
  const Fp h = u2 - p.x;
  const Fp r = s2 - p.y;
  if (h.is_zero()) {
    if (r.is_zero()) return jacobian_double(p);
    return Jacobian::infinity();
  }
  const Fp hh = sqr(h);
  const Fp hhh = h * hh;
  const Fp v = p.x * hh;
  const Fp x3 = sqr(r) - hhh - dbl(v);
  const Fp y3 = r * (v - x3) - p.y * hhh;
  const Fp z3 = p.z * h;
  return Jacobian{x3, y3, z3};
}

Affine to_affine(const Jacobian& p) {
  if (p.is_infinity()) return Affine{};
  const Fp zi = inverse(p.z);
  const Fp zi2 = sqr(zi);
  return Affine{p.x * zi2, p.y * zi2 * zi, false};
}

std::vector<Affine> batch_to_affine(std::span<const Jacobian> points) {
  std::vector<Affine> out(points.size());
  std::vector<Fp> prefix(points.size());
  Fp acc = Fp::one();
  for (std::size_t i = 0; i < points.size(); ++i) {
    prefix[i] = acc;
    if (!points[i].is_infinity()) acc = acc * points[i].z;
  }
  Fp inv = inverse(acc);
  for (std::size_t i = points.size(); i-- > 0;) {
    if (points[i].is_infinity()) continue;
    const Fp zi = inv * prefix[i];
    inv = inv * points[i].z;
    const Fp zi2 = sqr(zi);
    out[i] = Affine{points[i].x * zi2, points[i].y * zi2 * zi, false};
  }
  return out;
}

Affine affine_add(const Affine& a, const Affine& b) {
  return to_affine(jacobian_add_affine(Jacobian::from_affine(a), b));
}

Affine scalar_mul(const Affine& p, std::span<const std::uint64_t> k) {
  const std::size_t bits = bit_length(k);
  if (p.infinity || bits == 0) return Affine{};

  std::array<Jacobian, 15> jac;
  jac[0] = Jacobian::from_affine(p);
  jac[1] = jacobian_double(jac[0]);
  for (std::size_t i = 2; i < jac.size(); ++i) jac[i] = jacobian_add_affine(jac[i - 1], p);
  const std::vector<Affine> table = batch_to_affine(jac);

  const std::size_t windows = (bits + 3) / 4;
  Jacobian acc = Jacobian::infinity();
  for (std::size_t w = windows; w-- > 0;) {
    if (!acc.is_infinity()) {
      for (int s = 0; s < 4; ++s) acc = jacobian_double(acc);
    }
    unsigned nibble = 0;
    for (std::size_t b = 4; b-- > 0;) {
      const std::size_t bit = w * 4 + b;
      nibble = (nibble << 1) | ((bit < k.size() * 64 && test_bit(k, bit)) ? 1U : 0U);
    }
    if (nibble != 0) acc = jacobian_add_affine(acc, table[nibble - 1]);
  }
  return to_affine(acc);
}

FixedBaseTable::FixedBaseTable(const Affine& base, std::size_t windows) : base_(base), windows_(windows) {
  std::vector<Jacobian> jac;
  jac.reserve(windows * 15);
  Jacobian row = Jacobian::from_affine(base);
  for (std::size_t w = 0; w < windows; ++w) {
    const Affine row_affine = to_affine(row);
    Jacobian acc = row;
    jac.push_back(acc);
    for (int d = 2; d <= 15; ++d) {
      acc = jacobian_add_affine(acc, row_affine);
      jac.push_back(acc);
    }
    // next row base = 16 * row
    row = jacobian_add_affine(acc, row_affine);
  }
  table_ = batch_to_affine(jac);
}

Affine FixedBaseTable::mul(std::span<const std::uint64_t> k) const {
  const std::size_t bits = bit_length(k);
  if (bits > windows_ * 4) return scalar_mul(base_, k);
  Jacobian acc = Jacobian::infinity();
  for (std::size_t w = 0; w * 4 < bits; ++w) {
    unsigned nibble = 0;
    for (std::size_t b = 4; b-- > 0;) {
      const std::size_t bit = w * 4 + b;
      nibble = (nibble << 1) | ((bit < k.size() * 64 && test_bit(k, bit)) ? 1U : 0U);
    }
    if (nibble != 0) acc = jacobian_add_affine(acc, table_[w * 15 + nibble - 1]);
  }
  return to_affine(acc);
}

bool in_prime_subgroup(const Affine& p) {
  if (!on_curve(p)) return false;
  return scalar_mul(p, kOrder).infinity;
}

bool lift_x(const Fp& x, bool odd_y, Affine& out) {
  Fp y;
  if (!sqrt(x * sqr(x) + x, y)) return false;
  if (is_odd(y) != odd_y) y = -y;
  out = Affine{x, y, false};
  return true;
}

namespace {

// Tangent at t evaluated at psi(q), scaled by an F_q factor; doubles t in place.
Fp2 double_step(Jacobian& t, const Fp& qx, const Fp& qy) {
  const Fp xx = sqr(t.x);
  const Fp yy = sqr(t.y);
  const Fp yyyy = sqr(yy);
  const Fp zz = sqr(t.z);
  const Fp m = dbl(xx) + xx + sqr(zz);
  const Fp z3 = dbl(t.y * t.z);

  const Fp2 line{m * (qx * zz + t.x) - dbl(yy), z3 * zz * qy};

  const Fp s = dbl(dbl(t.x * yy));
  const Fp x3 = sqr(m) - dbl(s);
  const Fp y3 = m * (s - x3) - dbl(dbl(dbl(yyyy)));
  t = Jacobian{x3, y3, z3};
  return line;
}

// Chord through t and p evaluated at psi(q); returns false for a vertical line.
bool add_step(Jacobian& t, const Affine& p, const Fp& qx, const Fp& qy, Fp2& line) {
  const Fp zz = sqr(t.z);
  const Fp u2 = p.x * zz;
  const Fp s2 = p.y * t.z * zz;
  const Fp h = u2 - t.x;
  const Fp r = s2 - t.y;
  if (h.is_zero()) {
    if (r.is_zero()) {
      line = double_step(t, qx, qy);
      return true;
    }
    t = Jacobian::infinity();
    return false;
  }
  const Fp zh = t.z * h;
  line = Fp2{r * (qx + p.x) - p.y * zh, qy * zh};

  const Fp hh = sqr(h);
  const Fp hhh = h * hh;
  const Fp v = t.x * hh;
  const Fp x3 = sqr(r) - hhh - dbl(v);
  const Fp y3 = r * (v - x3) - t.y * hhh;
  t = Jacobian{x3, y3, zh};
  return true;
}

// Unitary squaring: for a^2 + b^2 = 1, (a + bi)^2 = (2a^2 - 1) + 2ab i.
Fp2 unitary_sqr(const Fp2& x) {
  const Fp aa = sqr(x.a);
  return Fp2{dbl(aa) - Fp::one(), dbl(x.a * x.b)};
}

}  // namespace

Fp2 final_exponentiation(const Fp2& f) {
  // f^(q-1) = conj(f) / f since the q-power Frobenius is conjugation.
  const Fp2 u = conj(f) * inverse(f);
  const std::size_t bits = bit_length(kCofactor);
  Fp2 acc = Fp2::one();
  for (std::size_t i = bits; i-- > 0;) {
    acc = unitary_sqr(acc);
    if (test_bit(kCofactor, i)) acc = acc * u;
  }
  return acc;
}

Fp2 tate_pairing(const Affine& p, const Affine& q) {
  if (p.infinity || q.infinity) return Fp2::one();
  const Fp qx = q.x;
  const Fp qy = q.y;
  Jacobian t = Jacobian::from_affine(p);
  Fp2 f = Fp2::one();
  const std::size_t bits = bit_length(kOrder);
  for (std::size_t i = bits - 1; i-- > 0;) {
    f = sqr(f) * double_step(t, qx, qy);
    if (test_bit(kOrder, i)) {
      Fp2 line;
      if (add_step(t, p, qx, qy, line)) f = f * line;
    }
  }
  return final_exponentiation(f);
}

}  // namespace huap::detail
