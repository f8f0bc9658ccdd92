"""Injectable randomness sources for keygen operations.

Production code uses :class:`SystemRng`. Tests and the arena use
:class:`SeededRng`, a SHA-256 counter-mode stream, so that every keygen
result is reproducible from a recorded seed.
"""

import hashlib
import secrets
import threading

from .errors import INTERNAL, CryptoMathError


class SystemRng:
    def randbytes(self, n: int) -> bytes:
        return secrets.token_bytes(n)


class SeededRng:
    """Deterministic byte stream: block i = sha256(seed_bytes || i as u64be).

    Draws are serialized with a lock so concurrent callers never observe
    overlapping blocks.
    """

    def __init__(self, seed):
        if isinstance(seed, int):
            seed = seed.to_bytes(8, "big") if seed < 2**64 else seed.to_bytes((seed.bit_length() + 7) // 8, "big")
        elif isinstance(seed, str):
            seed = seed.encode()
        self._seed = b"cryptomath/rng/v1" + bytes(seed)
        self._counter = 0
        self._buffer = b""
        self._lock = threading.Lock()

    def randbytes(self, n: int) -> bytes:
        with self._lock:
            while len(self._buffer) < n:
                block = hashlib.sha256(self._seed + self._counter.to_bytes(8, "big")).digest()
                self._counter += 1
                self._buffer += block
            out, self._buffer = self._buffer[:n], self._buffer[n:]
            return out


class NullRng:
    """Refuses every draw; keygen ops fail with ``internal``."""

    def randbytes(self, n: int) -> bytes:
        raise CryptoMathError(INTERNAL, "no randomness source configured")


def randbelow(rng, upper: int, lower: int = 0) -> int:
    """Uniform integer in [lower, upper) by rejection sampling over whole bytes."""
    span = upper - lower
    if span <= 0:
        raise ValueError("empty range")
    nbytes = (span.bit_length() + 7) // 8
    excess = 8 * nbytes - span.bit_length()
    while True:
        v = int.from_bytes(rng.randbytes(nbytes), "big") >> excess
        if v < span:
            return lower + v
