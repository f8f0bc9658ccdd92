"""Modular arithmetic, CRT and RSA key generation over Python integers."""

from functools import reduce
from math import gcd as _gcd
from math import lcm

from .errors import MODULI_NOT_COPRIME, NOT_INVERTIBLE, CryptoMathError, input_error
from .rng import randbelow

RSA_MIN_BITS = 256
RSA_MAX_BITS = 4096
RSA_SECURE_BITS = 2048
RSA_E = 65537
_MR_ROUNDS = 40
_SMALL_PRIMES = [p for p in range(3, 2000, 2) if all(p % q for q in range(3, int(p**0.5) + 1, 2))]


def _check_nat(name: str, v: int):
    if v < 0:
        raise input_error(f"{name} must be non-negative")


def _check_mod(mod: int):
    if mod < 1:
        raise input_error("mod must be >= 1")


def modexp(base: int, exp: int, mod: int) -> int:
    _check_nat("base", base)
    _check_nat("exp", exp)
    _check_mod(mod)
    return pow(base, exp, mod)


def invmod(a: int, mod: int) -> int:
    _check_nat("a", a)
    _check_mod(mod)
    if _gcd(a, mod) != 1:
        raise CryptoMathError(NOT_INVERTIBLE, "gcd(a, mod) != 1")
    return pow(a, -1, mod)


def addmod(a: int, b: int, mod: int) -> int:
    _check_nat("a", a)
    _check_nat("b", b)
    _check_mod(mod)
    return (a + b) % mod


def mulmod(a: int, b: int, mod: int) -> int:
    _check_nat("a", a)
    _check_nat("b", b)
    _check_mod(mod)
    return a * b % mod


def gcd(a: int, b: int) -> int:
    _check_nat("a", a)
    _check_nat("b", b)
    return _gcd(a, b)


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    """Solve x = r_i (mod m_i) for pairwise-coprime moduli; returns (x, prod m_i)."""
    if not residues or len(residues) != len(moduli):
        raise input_error("residues and moduli must be non-empty and of equal length")
    for r in residues:
        _check_nat("residue", r)
    for m in moduli:
        if m < 2:
            raise input_error("every modulus must be >= 2")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if _gcd(moduli[i], moduli[j]) != 1:
                raise CryptoMathError(MODULI_NOT_COPRIME, f"moduli[{i}] and moduli[{j}] share a factor")
    modulus = reduce(lambda a, b: a * b, moduli)
    x = 0
    for r, m in zip(residues, moduli):
        rest = modulus // m
        x += r * rest * pow(rest, -1, m)
    return x % modulus, modulus


def is_probable_prime(n: int, rng) -> bool:
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(_MR_ROUNDS):
        x = pow(randbelow(rng, n - 1, 2), d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(bits: int, rng) -> int:
    while True:
        # top two bits set so the product of two such primes has full length
        c = randbelow(rng, 1 << bits) | (3 << (bits - 2)) | 1
        if _gcd(c - 1, RSA_E) == 1 and is_probable_prime(c, rng):
            return c


def rsa_keygen(bits: int, rng) -> dict:
    """Return ``{n, e, d, p, q}`` with bitlen(n) == bits and d = e^-1 mod lcm(p-1, q-1)."""
    if not RSA_MIN_BITS <= bits <= RSA_MAX_BITS:
        raise input_error(f"bits must be in [{RSA_MIN_BITS}, {RSA_MAX_BITS}]")
    p_bits = (bits + 1) // 2
    q_bits = bits - p_bits
    while True:
        p = _random_prime(p_bits, rng)
        q = _random_prime(q_bits, rng)
        if p == q:
            continue
        n = p * q
        if n.bit_length() != bits:
            continue
        lam = lcm(p - 1, q - 1)
        return {"n": n, "e": RSA_E, "d": pow(RSA_E, -1, lam), "p": p, "q": q}
