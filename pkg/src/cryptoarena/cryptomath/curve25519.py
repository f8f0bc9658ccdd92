"""X25519 key agreement and Ed25519 signatures (RFC 7748 / RFC 8032)."""

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey
from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey, X25519PublicKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from .errors import LOW_ORDER_POINT, CryptoMathError, require_len

_RAW = (Encoding.Raw, PublicFormat.Raw)


def x25519_public(sk: bytes) -> bytes:
    require_len("sk", sk, 32)
    return X25519PrivateKey.from_private_bytes(sk).public_key().public_bytes(*_RAW)


def x25519_keygen(rng) -> tuple[bytes, bytes]:
    sk = rng.randbytes(32)
    return sk, x25519_public(sk)


def x25519_dh(sk: bytes, pk: bytes) -> bytes:
    require_len("sk", sk, 32)
    require_len("pk", pk, 32)
    priv = X25519PrivateKey.from_private_bytes(sk)
    try:
        shared = priv.exchange(X25519PublicKey.from_public_bytes(pk))
    except ValueError:
        # OpenSSL refuses all-zero outputs itself
        shared = bytes(32)
    if shared == bytes(32):
        raise CryptoMathError(LOW_ORDER_POINT, "shared secret is all zero (low-order public key)")
    return shared


def ed25519_public(sk: bytes) -> bytes:
    require_len("sk", sk, 32)
    return Ed25519PrivateKey.from_private_bytes(sk).public_key().public_bytes(*_RAW)


def ed25519_keygen(rng) -> tuple[bytes, bytes]:
    sk = rng.randbytes(32)
    return sk, ed25519_public(sk)


def ed25519_sign(sk: bytes, msg: bytes) -> bytes:
    require_len("sk", sk, 32)
    return Ed25519PrivateKey.from_private_bytes(sk).sign(msg)


def ed25519_verify(pk: bytes, msg: bytes, sig: bytes) -> bool:
    require_len("pk", pk, 32)
    require_len("sig", sig, 64)
    try:
        Ed25519PublicKey.from_public_bytes(pk).verify(sig, msg)
    except (InvalidSignature, ValueError):
        return False
    return True
