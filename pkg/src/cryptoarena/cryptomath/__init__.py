"""Deterministic cryptographic calculator operations (transport independent)."""

from .errors import ERROR_CODES, CryptoMathError
from .rng import NullRng, SeededRng, SystemRng

__all__ = ["ERROR_CODES", "CryptoMathError", "NullRng", "SeededRng", "SystemRng"]
