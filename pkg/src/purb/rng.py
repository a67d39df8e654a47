"""Randomness sources.

Every operation that needs randomness takes an explicit source so that
tests and the CLI's deterministic mode can reproduce blobs byte-for-byte.
The default source is the OS CSPRNG; the seeded source is a simple
SHA-256 counter stream and must never be used outside tests.
"""

from __future__ import annotations

import hashlib
import os


class RandomSource:
    """OS-backed randomness."""

    def randbytes(self, n: int) -> bytes:
        return os.urandom(n)


class SeededSource(RandomSource):
    """Deterministic byte stream: block i is SHA-256(seed || i).

    Fully specified, so blobs produced from the same seed are identical
    across platforms and Python versions. INSECURE by construction.
    """

    def __init__(self, seed: bytes | int):
        if isinstance(seed, int):
            seed = seed.to_bytes(8, "big", signed=False)
        if not isinstance(seed, (bytes, bytearray)):
            raise TypeError("seed must be bytes or int")
        self._seed = bytes(seed)
        self._counter = 0
        self._buf = b""

    def randbytes(self, n: int) -> bytes:
        while len(self._buf) < n:
            block = hashlib.sha256(
                self._seed + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            self._buf += block
        out, self._buf = self._buf[:n], self._buf[n:]
        return out


def system_rng() -> RandomSource:
    return RandomSource()


def seeded_rng(seed: bytes | int) -> SeededSource:
    return SeededSource(seed)


def random_scalar_below(rng: RandomSource, order: int) -> int:
    """Uniform integer in [1, order), by rejection on the covering byte length."""
    nbytes = (order.bit_length() + 7) // 8
    while True:
        v = int.from_bytes(rng.randbytes(nbytes), "big")
        if 1 <= v < order:
            return v
