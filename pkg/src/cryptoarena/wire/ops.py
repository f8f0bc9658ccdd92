"""Operation table: argument schemas, output shapes, examples and handlers.

Every dispatchable op has exactly one :class:`OpSpec`. Handlers receive
decoded Python values (``bytes``/``int``/lists) and return the result map
with bytes and ``*_hex`` integers already rendered as ``0x`` strings.
"""

from dataclasses import dataclass
from typing import Any, Callable, Optional

from ..cryptomath import bls, curve25519, merkle, numtheory, secp256k1, symmetric

BYTES = "bytes"
INT = "int"
INT_ARRAY = "array<int>"
BYTES_ARRAY = "array<bytes>"
TERMS = "array<term>"
STRING = "string"


@dataclass(frozen=True)
class Arg:
    name: str
    type: str
    length: Optional[int] = None

    def schema(self) -> dict:
        out: dict[str, Any] = {"type": self.type}
        if self.length is not None:
            out["len"] = self.length
        if self.type == TERMS:
            out["items"] = {
                "g1": {"type": BYTES, "len": 48},
                "g2": {"type": BYTES, "len": 96},
                "sign": {"type": INT, "values": [1, -1]},
            }
        return out


@dataclass(frozen=True)
class OpSpec:
    name: str
    args: tuple
    output: dict
    example: dict
    usage: str
    handler: Callable
    keygen: bool = False

    def schema(self) -> dict:
        return {
            "op": self.name,
            "expected_args_schema": {a.name: a.schema() for a in self.args},
            "expected_output_shape": dict(self.output),
            "example_args": dict(self.example),
        }


def hx(data: bytes) -> str:
    return "0x" + data.hex()


def ihx(value: int) -> str:
    return hex(value)


# Example constants. sk = 3 is the secp256k1 key from BIP340 vector 0.
_SK3 = "0x" + "00" * 31 + "03"
_PK3 = "0x02f9308a019258c31049344f85f89d5229b531c845836f99b08601f113bce036f9"
_XONLY3 = "0xf9308a019258c31049344f85f89d5229b531c845836f99b08601f113bce036f9"
_SCHNORR_ABC = (
    "0x1a12ed9cead1287be208c28b68a7068e3c2baa796e521cc885f06c38fcab184d"
    "774fd74113e8436ef1c5cf5ca19cc50b77af305efc10e339a6545b39f3b41ee0"
)
_ZK_PROOF = (
    "0x46482ba0c283bd23df7b9f5341cec6911c9bbfbe4e6e70e273d3edf128ea5906"
    "8ee3a3c502f0ba71effccc4461484068dfc8550dcfb161bf2d4c75e1a27200ba"
)
_ED_SK = "0x" + bytes(range(32)).hex()
_ED_PK = "0x03a107bff3ce10be1d70dd18e74bc09967e4d6309ba50d5f1ddc8664125531b8"
_ED_SIG_ABC = (
    "0xcc46d62d3754f41754b27b6ea2cb2c272bafa7a5a1f6062bd060f414e50caaea"
    "c2da66ad39cef4424a90236ea907b7d8057e3443dc5abfc9986967ee7213a407"
)
_X25519_PK = "0xa4e09292b651c278b9772c569f5fa9bb13d906b46ab68c9df9dc2b4409f8a209"
_G1_GEN = (
    "0x97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb"
)
_G2_GEN = (
    "0x93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049334cf11213945d57e5ac7d055d042b7e"
    "024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8"
)


def _specs(ctx) -> list[OpSpec]:
    """Build the table; ``ctx`` supplies ``rng``, ``chain_cap`` and introspection."""
    one = "0x" + "00" * 31 + "01"
    two = "0x" + "00" * 31 + "02"
    return [
        OpSpec(
            "ping", (), {"pong": "string", "version": "string"}, {},
            "Liveness check. Takes no arguments and returns pong plus the calculator version.",
            lambda: {"pong": "pong", "version": ctx.version},
        ),
        OpSpec(
            "schema", (Arg("op", STRING),),
            {"op": "string", "expected_args_schema": "object", "expected_output_shape": "object",
             "example_args": "object"},
            {"op": "sha256"},
            "Return the canonical argument names and types, the output shape and example arguments for op.",
            lambda op: ctx.schema_of(op),
        ),
        OpSpec(
            "help", (Arg("op", STRING),),
            {"op": "string", "usage": "string", "expected_args_schema": "object",
             "expected_output_shape": "object", "example_args": "object"},
            {"op": "hmac_sha256"},
            "Like schema, plus a short human-readable usage paragraph for op.",
            lambda op: ctx.help_of(op),
        ),
        OpSpec(
            "sha256", (Arg("data", BYTES),), {"digest_hex": "bytes(32)"}, {"data": "0x61"},
            "SHA-256 digest of data (0x-hex bytes, may be empty).",
            lambda data: {"digest_hex": hx(symmetric.sha256(data))},
        ),
        OpSpec(
            "sha512", (Arg("data", BYTES),), {"digest_hex": "bytes(64)"}, {"data": "0x61"},
            "SHA-512 digest of data (0x-hex bytes, may be empty).",
            lambda data: {"digest_hex": hx(symmetric.sha512(data))},
        ),
        OpSpec(
            "sha256_chain", (Arg("data", BYTES), Arg("iters", INT)), {"digest_hex": "bytes(32)"},
            {"data": "0x61", "iters": 3},
            "Apply SHA-256 iters times starting from data: h1 = sha256(data), hi = sha256(h(i-1)). "
            f"iters must be between 1 and the server cap (default {symmetric.DEFAULT_CHAIN_CAP}).",
            lambda data, iters: {"digest_hex": hx(symmetric.sha256_chain(data, iters, ctx.chain_cap))},
        ),
        OpSpec(
            "hmac_sha256", (Arg("key", BYTES), Arg("msg", BYTES)), {"tag_hex": "bytes(32)"},
            {"key": "0x" + "0b" * 20, "msg": "0x4869205468657265"},
            "HMAC-SHA256 tag of msg under key. Both key and msg are 0x-hex bytes of any length.",
            lambda key, msg: {"tag_hex": hx(symmetric.hmac_sha256(key, msg))},
        ),
        OpSpec(
            "hkdf_sha256",
            (Arg("ikm", BYTES), Arg("salt", BYTES), Arg("info", BYTES), Arg("len", INT)),
            {"okm_hex": "bytes"},
            {"ikm": "0x" + "0b" * 22, "salt": "0x000102030405060708090a0b0c", "info": "0xf0f1f2f3f4f5f6f7f8f9",
             "len": 42},
            f"HKDF-SHA256 extract-then-expand of ikm with salt and info, producing len bytes (1..{symmetric.HKDF_MAX_LEN}).",
            lambda ikm, salt, info, len: {"okm_hex": hx(symmetric.hkdf_sha256(ikm, salt, info, len))},
        ),
        OpSpec(
            "aes_gcm_encrypt",
            (Arg("key", BYTES, 32), Arg("nonce", BYTES, 12), Arg("aad", BYTES), Arg("plaintext", BYTES)),
            {"ciphertext_hex": "bytes"},
            {"key": "0x" + "00" * 32, "nonce": "0x" + "00" * 12, "aad": "0x", "plaintext": "0x68656c6c6f"},
            "AES-256-GCM encryption. key is 32 bytes, nonce 12 bytes. ciphertext_hex is the ciphertext "
            "followed by the 16-byte authentication tag.",
            lambda key, nonce, aad, plaintext: {
                "ciphertext_hex": hx(symmetric.aes_gcm_encrypt(key, nonce, aad, plaintext))
            },
        ),
        OpSpec(
            "x25519_keygen", (), {"sk": "bytes(32)", "pk": "bytes(32)"}, {},
            "Generate a fresh X25519 key pair.",
            lambda: dict(zip(("sk", "pk"), map(hx, curve25519.x25519_keygen(ctx.rng)))),
            keygen=True,
        ),
        OpSpec(
            "x25519_dh", (Arg("sk", BYTES, 32), Arg("pk", BYTES, 32)), {"shared": "bytes(32)"},
            {"sk": _ED_SK, "pk": _X25519_PK},
            "X25519 shared secret from our 32-byte sk and the peer's 32-byte pk. "
            "Fails with low_order_point if the result is all zero.",
            lambda sk, pk: {"shared": hx(curve25519.x25519_dh(sk, pk))},
        ),
        OpSpec(
            "ed25519_keygen", (), {"sk": "bytes(32)", "pk": "bytes(32)"}, {},
            "Generate a fresh Ed25519 key pair (sk is the 32-byte seed).",
            lambda: dict(zip(("sk", "pk"), map(hx, curve25519.ed25519_keygen(ctx.rng)))),
            keygen=True,
        ),
        OpSpec(
            "ed25519_sign", (Arg("sk", BYTES, 32), Arg("msg", BYTES)), {"sig": "bytes(64)"},
            {"sk": _ED_SK, "msg": "0x616263"},
            "Ed25519 signature of msg with the 32-byte seed sk.",
            lambda sk, msg: {"sig": hx(curve25519.ed25519_sign(sk, msg))},
        ),
        OpSpec(
            "ed25519_verify", (Arg("pk", BYTES, 32), Arg("msg", BYTES), Arg("sig", BYTES, 64)), {"ok": "bool"},
            {"pk": _ED_PK, "msg": "0x616263", "sig": _ED_SIG_ABC},
            "Verify an Ed25519 signature. An invalid signature is a successful call with ok = false.",
            lambda pk, msg, sig: {"ok": curve25519.ed25519_verify(pk, msg, sig)},
        ),
        OpSpec(
            "secp256k1_keygen", (), {"sk": "bytes(32)", "pk": "bytes(33)"}, {},
            "Generate a secp256k1 key pair; pk is the 33-byte compressed point sk*G.",
            lambda: dict(zip(("sk", "pk"), map(hx, secp256k1.keygen(ctx.rng)))),
            keygen=True,
        ),
        OpSpec(
            "secp256k1_add", (Arg("p1", BYTES, 33), Arg("p2", BYTES, 33)), {"p_out": "bytes(33)"},
            {"p1": _PK3, "p2": _PK3},
            "Add two compressed secp256k1 points. Fails with point_at_infinity when p2 = -p1.",
            lambda p1, p2: {"p_out": hx(secp256k1.add(p1, p2))},
        ),
        OpSpec(
            "secp256k1_scalar_mul", (Arg("p", BYTES, 33), Arg("scalar", BYTES, 32)), {"p_out": "bytes(33)"},
            {"p": _PK3, "scalar": two},
            "Multiply a compressed secp256k1 point by a 32-byte big-endian scalar (reduced mod n).",
            lambda p, scalar: {"p_out": hx(secp256k1.scalar_mul(p, scalar))},
        ),
        OpSpec(
            "secp256k1_pedersen_commit", (Arg("value", BYTES, 32), Arg("blind", BYTES, 32)),
            {"commitment": "bytes(33)", "H": "bytes(33)"},
            {"value": one, "blind": two},
            "Pedersen commitment value*H + blind*G on secp256k1. H is a fixed hash-derived generator "
            "and is returned so verifiers can pin it.",
            lambda value, blind: dict(zip(("commitment", "H"), map(hx, secp256k1.pedersen_commit(value, blind)))),
        ),
        OpSpec(
            "secp256k1_schnorr_sign", (Arg("sk", BYTES, 32), Arg("msg", BYTES)),
            {"sig": "bytes(64)", "pk_xonly": "bytes(32)"},
            {"sk": _SK3, "msg": "0x616263"},
            "BIP340 Schnorr signature over msg (any length) with sk; returns the signature and x-only pk.",
            lambda sk, msg: {"sig": hx(secp256k1.schnorr_sign(sk, msg)), "pk_xonly": hx(secp256k1.xonly_pubkey(sk))},
        ),
        OpSpec(
            "secp256k1_schnorr_verify", (Arg("pk_xonly", BYTES, 32), Arg("msg", BYTES), Arg("sig", BYTES, 64)),
            {"ok": "bool"},
            {"pk_xonly": _XONLY3, "msg": "0x616263", "sig": _SCHNORR_ABC},
            "Verify a BIP340 Schnorr signature against an x-only public key.",
            lambda pk_xonly, msg, sig: {"ok": secp256k1.schnorr_verify(pk_xonly, msg, sig)},
        ),
        OpSpec(
            "zk_age_over_21_prove", (Arg("cred_sk", BYTES, 32), Arg("nonce", BYTES)),
            {"pk_xonly": "bytes(32)", "proof_sig": "bytes(64)"},
            {"cred_sk": _SK3, "nonce": "0x6e6f6e6365"},
            "Demonstrative age-over-21 credential proof: a Schnorr signature by cred_sk over a "
            "domain-separated hash of the verifier's nonce. Not a real range proof.",
            lambda cred_sk, nonce: dict(
                zip(("pk_xonly", "proof_sig"), map(hx, secp256k1.zk_age_over_21_prove(cred_sk, nonce)))
            ),
        ),
        OpSpec(
            "zk_age_over_21_verify",
            (Arg("pk_xonly", BYTES, 32), Arg("nonce", BYTES), Arg("proof_sig", BYTES, 64)),
            {"ok": "bool"},
            {"pk_xonly": _XONLY3, "nonce": "0x6e6f6e6365", "proof_sig": _ZK_PROOF},
            "Check an age-over-21 proof for the same nonce and x-only credential key.",
            lambda pk_xonly, nonce, proof_sig: {"ok": secp256k1.zk_age_over_21_verify(pk_xonly, nonce, proof_sig)},
        ),
        OpSpec(
            "modexp", (Arg("base", INT), Arg("exp", INT), Arg("mod", INT)), {"value_hex": "int"},
            {"base": 2, "exp": 10, "mod": 1000},
            "base^exp mod mod. Integers may be JSON numbers or 0x-hex strings; mod >= 1.",
            lambda base, exp, mod: {"value_hex": ihx(numtheory.modexp(base, exp, mod))},
        ),
        OpSpec(
            "invmod", (Arg("a", INT), Arg("mod", INT)), {"value_hex": "int"}, {"a": 3, "mod": 7},
            "Inverse of a modulo mod. Fails with not_invertible when gcd(a, mod) != 1.",
            lambda a, mod: {"value_hex": ihx(numtheory.invmod(a, mod))},
        ),
        OpSpec(
            "addmod", (Arg("a", INT), Arg("b", INT), Arg("mod", INT)), {"value_hex": "int"},
            {"a": 5, "b": 9, "mod": 7},
            "(a + b) mod mod.",
            lambda a, b, mod: {"value_hex": ihx(numtheory.addmod(a, b, mod))},
        ),
        OpSpec(
            "mulmod", (Arg("a", INT), Arg("b", INT), Arg("mod", INT)), {"value_hex": "int"},
            {"a": 5, "b": 9, "mod": 7},
            "(a * b) mod mod.",
            lambda a, b, mod: {"value_hex": ihx(numtheory.mulmod(a, b, mod))},
        ),
        OpSpec(
            "gcd", (Arg("a", INT), Arg("b", INT)), {"value_hex": "int"}, {"a": 12, "b": 18},
            "Greatest common divisor of a and b.",
            lambda a, b: {"value_hex": ihx(numtheory.gcd(a, b))},
        ),
        OpSpec(
            "crt", (Arg("residues", INT_ARRAY), Arg("moduli", INT_ARRAY)),
            {"x_hex": "int", "modulus_hex": "int"},
            {"residues": [2, 3], "moduli": [3, 5]},
            "Chinese remainder: the unique x mod prod(moduli) with x = residues[i] mod moduli[i]. "
            "Moduli must be pairwise coprime (else moduli_not_coprime).",
            lambda residues, moduli: dict(zip(("x_hex", "modulus_hex"), map(ihx, numtheory.crt(residues, moduli)))),
        ),
        OpSpec(
            "merkle_parent_sha256", (Arg("left", BYTES), Arg("right", BYTES)), {"digest_hex": "bytes(32)"},
            {"left": "0x61", "right": "0x62"},
            "Merkle parent node sha256(left || right).",
            lambda left, right: {"digest_hex": hx(merkle.parent_sha256(left, right))},
        ),
        OpSpec(
            "merkle_verify_path_sha256",
            (Arg("leaf", BYTES), Arg("siblings", BYTES_ARRAY), Arg("index", INT), Arg("root", BYTES)),
            {"computed_root_hex": "bytes(32)", "valid": "bool"},
            {"leaf": "0x61", "siblings": ["0x62"], "index": 0,
             "root": "0xfb8e20fc2e4c3f248c60c39bd652f3c1347298bb977b8b4d5903b85055620603"},
            "Fold leaf up the tree with siblings. Bit i of index (least significant first) is 1 when the "
            "running node is the right child at level i. valid is computed_root == root.",
            lambda leaf, siblings, index, root: dict(
                zip(("computed_root_hex", "valid"), _merkle_out(*merkle.verify_path_sha256(leaf, siblings, index, root)))
            ),
        ),
        OpSpec(
            "bls_keygen", (), {"sk_hex": "bytes(32)", "pk_hex": "bytes(96)", "variant": "string"}, {},
            "Generate a BLS12-381 key pair with the public key in G2. variant names the ciphersuite.",
            lambda: _bls_keygen(ctx.rng),
            keygen=True,
        ),
        OpSpec(
            "g1_hash_to_curve", (Arg("msg", BYTES),), {"bytes_hex": "bytes(48)"}, {"msg": "0x616263"},
            f"Hash msg to BLS12-381 G1 (SSWU, XMD:SHA-256, DST {bls.DST.decode()}); 48-byte compressed point.",
            lambda msg: {"bytes_hex": hx(bls.g1_hash_to_curve(msg))},
        ),
        OpSpec(
            "pairing_product_check", (Arg("terms", TERMS),), {"ok": "bool"},
            {"terms": [{"g1": _G1_GEN, "g2": _G2_GEN, "sign": 1}, {"g1": _G1_GEN, "g2": _G2_GEN, "sign": -1}]},
            "ok is true iff the product of e(g1, g2)^sign over all terms is the identity. sign -1 negates "
            "the G1 point. An empty list is true.",
            lambda terms: {"ok": bls.pairing_product_check(terms)},
        ),
        OpSpec(
            "rsa_keygen", (Arg("bits", INT),),
            {"n_hex": "int", "e_hex": "int", "d_hex": "int", "p_hex": "int", "q_hex": "int"},
            {"bits": 512},
            f"Generate an RSA key with a bits-bit modulus ({numtheory.RSA_MIN_BITS}..{numtheory.RSA_MAX_BITS}), "
            f"e = 65537. Keys under {numtheory.RSA_SECURE_BITS} bits are flagged insecure in meta.",
            lambda bits: {f"{k}_hex": ihx(v) for k, v in numtheory.rsa_keygen(bits, ctx.rng).items()},
            keygen=True,
        ),
    ]


def _merkle_out(root: bytes, valid: bool):
    return hx(root), valid


def _bls_keygen(rng):
    sk, pk, variant = bls.keygen(rng)
    return {"sk_hex": hx(sk), "pk_hex": hx(pk), "variant": variant}


def build_table(ctx) -> dict[str, OpSpec]:
    return {spec.name: spec for spec in _specs(ctx)}
