"""Hashes, MACs, key derivation and authenticated encryption."""

import hashlib
import hmac

from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from .errors import input_error, require_len

DEFAULT_CHAIN_CAP = 1_000_000
HKDF_MAX_LEN = 255 * 32

_DIGESTS = {"sha256": hashlib.sha256, "sha512": hashlib.sha512}


def digest(data: bytes, algorithm: str = "sha256") -> bytes:
    try:
        fn = _DIGESTS[algorithm]
    except KeyError:
        raise input_error(f"unsupported digest algorithm {algorithm!r}") from None
    return fn(data).digest()


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def sha512(data: bytes) -> bytes:
    return hashlib.sha512(data).digest()


def sha256_chain(data: bytes, iters: int, cap: int = DEFAULT_CHAIN_CAP) -> bytes:
    """Return sha256 applied ``iters`` times to ``data``."""
    if iters < 1:
        raise input_error("iters must be >= 1")
    if iters > cap:
        raise input_error(f"iters exceeds the configured cap of {cap}")
    h = data
    for _ in range(iters):
        h = hashlib.sha256(h).digest()
    return h


def hmac_sha256(key: bytes, msg: bytes) -> bytes:
    return hmac.new(key, msg, hashlib.sha256).digest()


def hkdf_sha256(ikm: bytes, salt: bytes, info: bytes, length: int) -> bytes:
    if not 1 <= length <= HKDF_MAX_LEN:
        raise input_error(f"len must be in [1, {HKDF_MAX_LEN}]")
    # an empty salt is equivalent to HashLen zero bytes; pass None to be explicit
    kdf = HKDF(algorithm=hashes.SHA256(), length=length, salt=salt or None, info=info)
    return kdf.derive(ikm)


def aes_gcm_encrypt(key: bytes, nonce: bytes, aad: bytes, plaintext: bytes) -> bytes:
    """AES-256-GCM; returns ciphertext with the 16-byte tag appended."""
    require_len("key", key, 32)
    require_len("nonce", nonce, 12)
    return AESGCM(key).encrypt(nonce, plaintext, aad)
