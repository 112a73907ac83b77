#!/usr/bin/env python3
"""Derives the compiled-in type-A curve parameters and writes include/huap/detail/params.inc.

Curve: y^2 = x^3 + x over F_q, q = h*r - 1, q = 3 mod 4, #E(F_q) = q + 1.
r and the starting cofactor are derived from SHA-256 of fixed labels.
"""
import hashlib
import sys

import gmpy2

LIMBS = 8


def h2i(label, bits):
    out = b""
    c = 0
    while len(out) * 8 < bits:
        out += hashlib.sha256(label + c.to_bytes(4, "big")).digest()
        c += 1
    v = int.from_bytes(out, "big") >> (len(out) * 8 - bits)
    return v | (1 << (bits - 1))


def limbs(v, count=LIMBS):
    return [(v >> (64 * i)) & (2**64 - 1) for i in range(count)]


def fmt(name, v, count=LIMBS):
    body = ", ".join(f"0x{x:016x}ULL" for x in limbs(v, count))
    return f"inline constexpr std::array<std::uint64_t, {count}> {name} = {{{body}}};\n"


def main():
    r = int(gmpy2.next_prime(h2i(b"huap type-a r", 160)))
    k = h2i(b"huap type-a h", 512 - 160 - 2)
    while True:
        h = 4 * k
        q = h * r - 1
        if q.bit_length() == 512 and gmpy2.is_prime(q, 50):
            break
        k += 1
    R = 1 << 512
    inv = (-pow(q, -1, 2**64)) % 2**64
    out = []
    out.append("// Generated by tools/gen_params.py. Do not edit.\n")
    out.append(f"// q = {hex(q)}\n// r = {hex(r)}\n// h = {hex(h)}\n")
    out.append(f'inline constexpr const char* kFieldModulusHex = "{q:x}";\n')
    out.append(f'inline constexpr const char* kGroupOrderHex = "{r:x}";\n')
    out.append(f'inline constexpr const char* kCofactorHex = "{h:x}";\n')
    out.append(fmt("kModulus", q))
    out.append(f"inline constexpr std::uint64_t kMontInv = 0x{inv:016x}ULL;\n")
    out.append(fmt("kMontOne", R % q))
    out.append(fmt("kMontR2", (R * R) % q))
    out.append(fmt("kSqrtExp", (q + 1) // 4))
    out.append(fmt("kInvExp", q - 2))
    out.append(fmt("kOrder", r, 3))
    out.append(fmt("kCofactor", h, 6))
    path = sys.argv[1] if len(sys.argv) > 1 else "include/huap/detail/params.inc"
    with open(path, "w") as f:
        f.writelines(out)


if __name__ == "__main__":
    main()
