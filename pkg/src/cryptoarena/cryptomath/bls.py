"""BLS12-381 keygen, hash-to-G1 and pairing product checks.

Public keys live in G2 (96-byte compressed), messages hash to G1 (48-byte
compressed) with the RFC 9380 ``BLS12381G1_XMD:SHA-256_SSWU_RO_`` suite.
Field and pairing arithmetic is delegated to ``py_ecc``.
"""

from hashlib import sha256

from py_ecc.bls.hash_to_curve import hash_to_G1
from py_ecc.bls.point_compression import compress_G1, compress_G2, decompress_G1, decompress_G2
from py_ecc.fields import optimized_bls12_381_FQ12 as FQ12
from py_ecc.optimized_bls12_381 import (
    G1,
    G2,
    b,
    b2,
    curve_order,
    final_exponentiate,
    is_inf,
    is_on_curve,
    multiply,
    neg,
)
from py_ecc.optimized_bls12_381.optimized_pairing import miller_loop

from .errors import input_error, require_len
from .rng import randbelow

DST = b"CRYPTOMATH-BLS-SIG-V1"
VARIANT = "BLS12-381 pk:G2 msg:G1 BLS12381G1_XMD:SHA-256_SSWU_RO_ DST=CRYPTOMATH-BLS-SIG-V1"

G1_GENERATOR = G1
G2_GENERATOR = G2


def g1_to_bytes(pt) -> bytes:
    return compress_G1(pt).to_bytes(48, "big")


def g2_to_bytes(pt) -> bytes:
    z1, z2 = compress_G2(pt)
    return z1.to_bytes(48, "big") + z2.to_bytes(48, "big")


def g1_from_bytes(data: bytes, name: str = "g1"):
    require_len(name, data, 48)
    try:
        pt = decompress_G1(int.from_bytes(data, "big"))
    except ValueError as exc:
        raise input_error(f"{name}: {exc}") from None
    if is_inf(pt):
        raise input_error(f"{name}: point at infinity is not accepted")
    if not is_on_curve(pt, b) or not is_inf(multiply(pt, curve_order)):
        raise input_error(f"{name}: not in the G1 subgroup")
    return pt


def g2_from_bytes(data: bytes, name: str = "g2"):
    require_len(name, data, 96)
    try:
        pt = decompress_G2((int.from_bytes(data[:48], "big"), int.from_bytes(data[48:], "big")))
    except ValueError as exc:
        raise input_error(f"{name}: {exc}") from None
    if is_inf(pt):
        raise input_error(f"{name}: point at infinity is not accepted")
    if not is_on_curve(pt, b2) or not is_inf(multiply(pt, curve_order)):
        raise input_error(f"{name}: not in the G2 subgroup")
    return pt


def keygen(rng) -> tuple[bytes, bytes, str]:
    sk = randbelow(rng, curve_order, 1)
    return sk.to_bytes(32, "big"), g2_to_bytes(multiply(G2, sk)), VARIANT


def hash_to_g1_point(msg: bytes, dst: bytes = DST):
    return hash_to_G1(msg, dst, sha256)


def g1_hash_to_curve(msg: bytes) -> bytes:
    return g1_to_bytes(hash_to_g1_point(msg))


def pairing_product_check(terms: list[tuple[bytes, bytes, int]]) -> bool:
    """True iff prod e(g1_i, g2_i)^sign_i is the identity of GT.

    A sign of -1 negates the G1 point; G2 inputs are used verbatim.
    """
    decoded = []
    for i, (g1_bytes, g2_bytes, sign) in enumerate(terms):
        if sign not in (1, -1):
            raise input_error(f"terms[{i}].sign must be 1 or -1")
        p = g1_from_bytes(g1_bytes, f"terms[{i}].g1")
        q = g2_from_bytes(g2_bytes, f"terms[{i}].g2")
        decoded.append((neg(p) if sign == -1 else p, q))
    acc = FQ12.one()
    for p, q in decoded:
        acc = acc * miller_loop(q, p, final_exponentiate=False)
    return final_exponentiate(acc) == FQ12.one()


def g1_mul(g1_bytes: bytes, scalar: int) -> bytes:
    """Scalar multiple of a G1 point; used to build signatures in tests."""
    return g1_to_bytes(multiply(g1_from_bytes(g1_bytes), scalar % curve_order))
