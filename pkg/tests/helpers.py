"""Independent oracles used across the test suite.

Everything here recomputes expected values by a different route than the
library code under test: permitted lengths by mantissa inspection,
Diffie-Hellman by a hand-rolled ladder, leakage by full enumeration.
"""

from __future__ import annotations


def permitted_length(n: int) -> bool:
    """A length is permitted when, written as 1.m * 2^e, the mantissa m
    has no more significant bits than e's own binary representation."""
    if n <= 1:
        return True
    e = n.bit_length() - 1
    trailing = (n & -n).bit_length() - 1
    mantissa_bits = e - trailing
    return mantissa_bits <= e.bit_length()


def scan_padded(n: int) -> int:
    """Smallest permitted length >= n, by linear scan."""
    while not permitted_length(n):
        n += 1
    return n


def leakage_by_enumeration(pad_fn, max_len: int) -> int:
    """ceil(log2 |image|) by padding every single input length."""
    image = {pad_fn(length) for length in range(1, max_len + 1)}
    return (len(image) - 1).bit_length()


# Montgomery ladder on Curve25519, for cross-checking the native backend.

_P25519 = 2**255 - 19
_A24 = 121665


def _x25519_ladder(k: int, u: int) -> int:
    x1 = u % _P25519
    x2, z2, x3, z3 = 1, 0, x1, 1
    swap = 0
    for t in reversed(range(255)):
        bit = (k >> t) & 1
        swap ^= bit
        if swap:
            x2, x3 = x3, x2
            z2, z3 = z3, z2
        swap = bit
        a = (x2 + z2) % _P25519
        aa = a * a % _P25519
        b = (x2 - z2) % _P25519
        bb = b * b % _P25519
        e = (aa - bb) % _P25519
        c = (x3 + z3) % _P25519
        d = (x3 - z3) % _P25519
        da = d * a % _P25519
        cb = c * b % _P25519
        x3 = (da + cb) % _P25519
        x3 = x3 * x3 % _P25519
        z3 = (da - cb) % _P25519
        z3 = x1 * z3 * z3 % _P25519
        x2 = aa * bb % _P25519
        z2 = e * (aa + _A24 * e) % _P25519
    if swap:
        x2, x3 = x3, x2
        z2, z3 = z3, z2
    return x2 * pow(z2, _P25519 - 2, _P25519) % _P25519


def x25519_oracle(scalar: bytes, point: bytes) -> bytes:
    """RFC-style X25519 with clamping, little-endian bytes in and out."""
    k = bytearray(scalar)
    k[0] &= 248
    k[31] &= 127
    k[31] |= 64
    u = int.from_bytes(point, "little") & ((1 << 255) - 1)
    out = _x25519_ladder(int.from_bytes(bytes(k), "little"), u)
    return out.to_bytes(32, "little")
