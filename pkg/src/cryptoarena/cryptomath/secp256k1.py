"""secp256k1 group arithmetic, Pedersen commitments and BIP340 Schnorr.

Points are affine ``(x, y)`` integer tuples; ``None`` is the point at
infinity. The point at infinity has no SEC1 compressed encoding, so any
public operation that would return it raises ``point_at_infinity``.
"""

import hashlib

from .errors import POINT_AT_INFINITY, CryptoMathError, input_error, require_len
from .rng import randbelow

P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
G = (
    0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
    0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
)

PEDERSEN_H_TAG = b"cryptomath/pedersen/H"
ZK_AGE_TAG = b"cryptomath/zk/age>=21"


def is_on_curve(pt) -> bool:
    if pt is None:
        return True
    x, y = pt
    return 0 <= x < P and 0 <= y < P and (y * y - x * x * x - 7) % P == 0


def point_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        lam = 3 * x1 * x1 * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    return x3, (lam * (x1 - x3) - y1) % P


def point_neg(pt):
    if pt is None:
        return None
    return pt[0], (-pt[1]) % P


# Jacobian (X, Y, Z) helpers keep scalar multiplication to a single inversion.


def _jac_double(X1, Y1, Z1):
    if Y1 == 0:
        return 0, 0, 0
    S = 4 * X1 * Y1 * Y1 % P
    M = 3 * X1 * X1 % P
    X3 = (M * M - 2 * S) % P
    Y3 = (M * (S - X3) - 8 * pow(Y1, 4, P)) % P
    return X3, Y3, 2 * Y1 * Z1 % P


def _jac_add_affine(X1, Y1, Z1, x2, y2):
    if Z1 == 0:
        return x2, y2, 1
    Z1Z1 = Z1 * Z1 % P
    U2 = x2 * Z1Z1 % P
    S2 = y2 * Z1 * Z1Z1 % P
    if U2 == X1:
        if S2 != Y1:
            return 0, 0, 0
        return _jac_double(X1, Y1, Z1)
    H = (U2 - X1) % P
    R = (S2 - Y1) % P
    HH = H * H % P
    HHH = H * HH % P
    V = X1 * HH % P
    X3 = (R * R - HHH - 2 * V) % P
    Y3 = (R * (V - X3) - Y1 * HHH) % P
    return X3, Y3, Z1 * H % P


def point_mul(pt, k: int):
    k %= N
    if pt is None or k == 0:
        return None
    x, y = pt
    X, Y, Z = 0, 0, 0
    for bit in bin(k)[2:]:
        X, Y, Z = _jac_double(X, Y, Z)
        if bit == "1":
            X, Y, Z = _jac_add_affine(X, Y, Z, x, y)
    if Z == 0:
        return None
    zinv = pow(Z, -1, P)
    zinv2 = zinv * zinv % P
    return X * zinv2 % P, Y * zinv2 * zinv % P


def lift_x(x: int):
    """Even-y point with the given x coordinate, or None if there is none."""
    if not 0 <= x < P:
        return None
    y_sq = (pow(x, 3, P) + 7) % P
    y = pow(y_sq, (P + 1) // 4, P)
    if y * y % P != y_sq:
        return None
    return x, y if y % 2 == 0 else P - y


def encode_point(pt) -> bytes:
    if pt is None:
        raise CryptoMathError(POINT_AT_INFINITY, "result is the point at infinity")
    x, y = pt
    return bytes([2 + (y & 1)]) + x.to_bytes(32, "big")


def decode_point(data: bytes, name: str = "point"):
    require_len(name, data, 33)
    if data[0] not in (2, 3):
        raise input_error(f"{name}: prefix must be 0x02 or 0x03")
    pt = lift_x(int.from_bytes(data[1:], "big"))
    if pt is None:
        raise input_error(f"{name}: x coordinate is not on secp256k1")
    if (pt[1] & 1) != (data[0] & 1):
        pt = point_neg(pt)
    return pt


def scalar_from_bytes(data: bytes, name: str = "scalar") -> int:
    require_len(name, data, 32)
    return int.from_bytes(data, "big") % N


def keygen(rng) -> tuple[bytes, bytes]:
    d = randbelow(rng, N, 1)
    return d.to_bytes(32, "big"), encode_point(point_mul(G, d))


def add(p1: bytes, p2: bytes) -> bytes:
    return encode_point(point_add(decode_point(p1, "p1"), decode_point(p2, "p2")))


def scalar_mul(p: bytes, scalar: bytes) -> bytes:
    return encode_point(point_mul(decode_point(p, "p"), scalar_from_bytes(scalar)))


def _derive_pedersen_h():
    counter = 0
    while True:
        x = int.from_bytes(hashlib.sha256(PEDERSEN_H_TAG + counter.to_bytes(4, "big")).digest(), "big")
        pt = lift_x(x)
        if pt is not None:
            return pt
        counter += 1


PEDERSEN_H = _derive_pedersen_h()


def pedersen_commit(value: bytes, blind: bytes) -> tuple[bytes, bytes]:
    """Return ``(value*H + blind*G, H)`` as compressed points."""
    v = scalar_from_bytes(value, "value")
    b = scalar_from_bytes(blind, "blind")
    commitment = point_add(point_mul(PEDERSEN_H, v), point_mul(G, b))
    return encode_point(commitment), encode_point(PEDERSEN_H)


# --- BIP340 -----------------------------------------------------------------


def tagged_hash(tag: str, msg: bytes) -> bytes:
    tag_hash = hashlib.sha256(tag.encode()).digest()
    return hashlib.sha256(tag_hash + tag_hash + msg).digest()


def _xbytes(pt) -> bytes:
    return pt[0].to_bytes(32, "big")


def xonly_pubkey(sk: bytes) -> bytes:
    require_len("sk", sk, 32)
    d = int.from_bytes(sk, "big")
    if not 1 <= d < N:
        raise input_error("sk must be an integer in [1, n-1]")
    return _xbytes(point_mul(G, d))


def schnorr_sign(sk: bytes, msg: bytes, aux_rand: bytes = bytes(32)) -> bytes:
    require_len("sk", sk, 32)
    require_len("aux_rand", aux_rand, 32)
    d0 = int.from_bytes(sk, "big")
    if not 1 <= d0 < N:
        raise input_error("sk must be an integer in [1, n-1]")
    pub = point_mul(G, d0)
    d = d0 if pub[1] % 2 == 0 else N - d0
    t = (d ^ int.from_bytes(tagged_hash("BIP0340/aux", aux_rand), "big")).to_bytes(32, "big")
    k0 = int.from_bytes(tagged_hash("BIP0340/nonce", t + _xbytes(pub) + msg), "big") % N
    if k0 == 0:
        raise CryptoMathError(POINT_AT_INFINITY, "derived nonce is zero")
    R = point_mul(G, k0)
    k = k0 if R[1] % 2 == 0 else N - k0
    e = int.from_bytes(tagged_hash("BIP0340/challenge", _xbytes(R) + _xbytes(pub) + msg), "big") % N
    return _xbytes(R) + ((k + e * d) % N).to_bytes(32, "big")


def schnorr_verify(pk_xonly: bytes, msg: bytes, sig: bytes) -> bool:
    require_len("pk_xonly", pk_xonly, 32)
    require_len("sig", sig, 64)
    pub = lift_x(int.from_bytes(pk_xonly, "big"))
    r = int.from_bytes(sig[:32], "big")
    s = int.from_bytes(sig[32:], "big")
    if pub is None or r >= P or s >= N:
        return False
    e = int.from_bytes(tagged_hash("BIP0340/challenge", sig[:32] + pk_xonly + msg), "big") % N
    R = point_add(point_mul(G, s), point_neg(point_mul(pub, e)))
    return R is not None and R[1] % 2 == 0 and R[0] == r


def _age_message(nonce: bytes) -> bytes:
    if not nonce:
        raise input_error("nonce must be non-empty")
    return hashlib.sha256(ZK_AGE_TAG + nonce).digest()


def zk_age_over_21_prove(cred_sk: bytes, nonce: bytes) -> tuple[bytes, bytes]:
    """Credential-possession proof bound to ``nonce``.

    This is a Schnorr signature over a domain-separated digest of the nonce;
    it demonstrates the interface only and is not a range proof.
    """
    msg = _age_message(nonce)
    return xonly_pubkey(cred_sk), schnorr_sign(cred_sk, msg)


def zk_age_over_21_verify(pk_xonly: bytes, nonce: bytes, proof_sig: bytes) -> bool:
    return schnorr_verify(pk_xonly, _age_message(nonce), proof_sig)
